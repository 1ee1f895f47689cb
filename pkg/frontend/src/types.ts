export interface BBox {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}

export function bboxToArray(b: BBox): [number, number, number, number] {
  return [b.minLon, b.minLat, b.maxLon, b.maxLat];
}

export interface Feature {
  type: 'Feature';
  id: string;
  geometry: { type: string; coordinates: unknown };
  properties: Record<string, string>;
}

export interface FeatureCollection {
  type: 'FeatureCollection';
  features: Feature[];
}

export interface ResultsResponse {
  status: 'results';
  features: FeatureCollection;
  matched_concepts: string[];
  qualifier_set: string[][];
  bbox: [number, number, number, number];
}

export interface Candidate {
  concept: string;
  label: string;
  keyword: string;
}

export interface DisambiguationResponse {
  status: 'disambiguation';
  candidates: Candidate[];
}

export interface NoMatchResponse {
  status: 'no_match';
}

export interface ErrorResponse {
  status: 'error';
  message: string;
}

export type QueryResponse =
  | ResultsResponse
  | DisambiguationResponse
  | NoMatchResponse
  | ErrorResponse;

export interface ItemDetail {
  id: string;
  concept: string;
  properties: Record<string, string>;
  geometry: { type: string; coordinates: unknown };
  bbox: [number, number, number, number];
}

export interface RelatedEntry {
  relation: string;
  feature: Feature;
}

export interface RelatedResponse {
  item: string;
  radius: number;
  related: RelatedEntry[];
}

/** What the app needs from the backend; ApiClient is the fetch-based implementation. */
export interface Api {
  query(text: string, bbox: BBox | null, selected: string[] | null): Promise<QueryResponse>;
  itemDetail(itemId: string): Promise<ItemDetail>;
  related(itemId: string): Promise<RelatedResponse>;
}

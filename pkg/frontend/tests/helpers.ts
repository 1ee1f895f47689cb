import type {
  Api,
  BBox,
  Feature,
  FeatureCollection,
  ItemDetail,
  QueryResponse,
  RelatedEntry,
  RelatedResponse,
} from '../src/types';
import type { MapAdapter } from '../src/mapAdapter';

export class FakeMap implements MapAdapter {
  viewport: BBox = { minLon: 7.5, minLat: 45.0, maxLon: 7.8, maxLat: 45.15 };
  renderedFeatures: Feature[] = [];
  relatedEntries: RelatedEntry[] = [];
  fitCalls: BBox[] = [];
  private viewportListeners: Array<(bbox: BBox) => void> = [];
  private clickListeners: Array<(featureId: string) => void> = [];

  getViewport(): BBox {
    return this.viewport;
  }

  onViewportChange(listener: (bbox: BBox) => void): void {
    this.viewportListeners.push(listener);
  }

  onFeatureClick(listener: (featureId: string) => void): void {
    this.clickListeners.push(listener);
  }

  showResults(collection: FeatureCollection): number {
    this.renderedFeatures = [...collection.features];
    return this.renderedFeatures.length;
  }

  clearResults(): void {
    this.renderedFeatures = [];
  }

  showRelated(entries: RelatedEntry[]): void {
    this.relatedEntries = [...entries];
  }

  clearRelated(): void {
    this.relatedEntries = [];
  }

  fitTo(bbox: BBox): void {
    this.fitCalls.push(bbox);
  }

  panTo(viewport: BBox): void {
    this.viewport = viewport;
    for (const listener of this.viewportListeners) listener(viewport);
  }

  clickFeature(featureId: string): void {
    for (const listener of this.clickListeners) listener(featureId);
  }
}

export interface RecordedQuery {
  text: string;
  bbox: BBox | null;
  selected: string[] | null;
}

/** Scriptable API stub: push responses, inspect recorded calls. */
export class StubApi implements Api {
  queries: RecordedQuery[] = [];
  detailCalls: string[] = [];
  relatedCalls: string[] = [];
  private queryResponses: Array<() => Promise<QueryResponse>> = [];
  detailResponse: ItemDetail | null = null;
  relatedResponse: RelatedResponse | null = null;
  failRelated = false;

  pushQueryResponse(response: QueryResponse): void {
    this.queryResponses.push(() => Promise.resolve(response));
  }

  pushDeferred(): { resolve: (response: QueryResponse) => void } {
    let resolver: (response: QueryResponse) => void;
    const promise = new Promise<QueryResponse>((resolve) => {
      resolver = resolve;
    });
    this.queryResponses.push(() => promise);
    return { resolve: (response) => resolver(response) };
  }

  query(text: string, bbox: BBox | null, selected: string[] | null): Promise<QueryResponse> {
    this.queries.push({ text, bbox, selected });
    const next = this.queryResponses.shift();
    if (!next) throw new Error('StubApi: no scripted query response left');
    return next();
  }

  itemDetail(itemId: string): Promise<ItemDetail> {
    this.detailCalls.push(itemId);
    if (!this.detailResponse) return Promise.reject(new Error('no detail scripted'));
    return Promise.resolve(this.detailResponse);
  }

  related(itemId: string): Promise<RelatedResponse> {
    this.relatedCalls.push(itemId);
    if (this.failRelated) return Promise.reject(new Error('related fetch failed'));
    if (!this.relatedResponse) return Promise.reject(new Error('no related scripted'));
    return Promise.resolve(this.relatedResponse);
  }
}

export function feature(id: string, concept: string, name: string): Feature {
  return {
    type: 'Feature',
    id,
    geometry: { type: 'Point', coordinates: [7.67, 45.05] },
    properties: { name, concept },
  };
}

export function resultsPayload(features: Feature[], concepts: string[]): QueryResponse {
  return {
    status: 'results',
    features: { type: 'FeatureCollection', features },
    matched_concepts: concepts,
    qualifier_set: [],
    bbox: [7.5786, 45.0068, 7.7734, 45.1332],
  };
}

export function flushPromises(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

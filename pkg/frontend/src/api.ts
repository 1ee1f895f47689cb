import type { Api, BBox, ItemDetail, QueryResponse, RelatedResponse } from './types';
import { bboxToArray } from './types';

/**
 * Fetch-based API client. Submitting a new query aborts the previous
 * in-flight one, so a slow old response can never overwrite a newer one.
 */
export class ApiClient implements Api {
  private inflight: AbortController | null = null;

  constructor(private readonly baseUrl: string = '') {}

  async query(text: string, bbox: BBox | null, selected: string[] | null): Promise<QueryResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const payload: Record<string, unknown> = { text };
    if (bbox) payload.bbox = bboxToArray(bbox);
    if (selected && selected.length > 0) payload.selected_concepts = selected;
    const response = await fetch(`${this.baseUrl}/api/query`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
      signal: controller.signal,
    });
    const body = (await response.json()) as QueryResponse;
    if (this.inflight === controller) this.inflight = null;
    return body;
  }

  async itemDetail(itemId: string): Promise<ItemDetail> {
    const response = await fetch(`${this.baseUrl}/api/items/${encodeURIComponent(itemId)}`);
    if (!response.ok) throw new Error(`item lookup failed (${response.status})`);
    return (await response.json()) as ItemDetail;
  }

  async related(itemId: string): Promise<RelatedResponse> {
    const response = await fetch(`${this.baseUrl}/api/items/${encodeURIComponent(itemId)}/related`);
    if (!response.ok) throw new Error(`related lookup failed (${response.status})`);
    return (await response.json()) as RelatedResponse;
  }
}

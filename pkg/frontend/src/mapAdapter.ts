import type { BBox, FeatureCollection, RelatedEntry } from './types';

/**
 * Everything the app needs from the map, kept framework-free so tests can
 * drive a fake implementation without a DOM canvas.
 */
export interface MapAdapter {
  getViewport(): BBox;
  onViewportChange(listener: (bbox: BBox) => void): void;
  onFeatureClick(listener: (featureId: string) => void): void;
  /** Replace the result overlay; returns the number of rendered features. */
  showResults(collection: FeatureCollection, colorOf: (concept: string) => string): number;
  clearResults(): void;
  /** Overlay related items with a distinct style (kept separate from results). */
  showRelated(entries: RelatedEntry[]): void;
  clearRelated(): void;
  /** Zoom/center so the given box is visible. */
  fitTo(bbox: BBox): void;
}

const PALETTE = ['#e6194b', '#3063d8', '#2aa82a', '#9230c9', '#f58231', '#0a9c94', '#c7b409', '#e858c0'];

/** Stable vivid color per concept id. */
export function conceptColor(concept: string): string {
  let hash = 0;
  for (let i = 0; i < concept.length; i++) {
    hash = (hash * 31 + concept.charCodeAt(i)) | 0;
  }
  return PALETTE[Math.abs(hash) % PALETTE.length];
}

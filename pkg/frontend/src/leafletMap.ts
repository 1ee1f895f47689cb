import L from 'leaflet';
import type { BBox, FeatureCollection, RelatedEntry } from './types';
import type { MapAdapter } from './mapAdapter';

const DEFAULT_CENTER: [number, number] = [45.07, 7.68];
const DEFAULT_ZOOM = 12;

export class LeafletMap implements MapAdapter {
  private readonly map: L.Map;
  private resultsLayer: L.GeoJSON | null = null;
  private relatedLayer: L.LayerGroup | null = null;
  private viewportListeners: Array<(bbox: BBox) => void> = [];
  private clickListeners: Array<(featureId: string) => void> = [];

  constructor(container: HTMLElement, tileUrl: string, attribution: string) {
    this.map = L.map(container).setView(DEFAULT_CENTER, DEFAULT_ZOOM);
    L.tileLayer(tileUrl, { attribution, maxZoom: 19 }).addTo(this.map);
    this.map.on('moveend', () => {
      const viewport = this.getViewport();
      for (const listener of this.viewportListeners) listener(viewport);
    });
  }

  getViewport(): BBox {
    const bounds = this.map.getBounds();
    return {
      minLon: bounds.getWest(),
      minLat: bounds.getSouth(),
      maxLon: bounds.getEast(),
      maxLat: bounds.getNorth(),
    };
  }

  onViewportChange(listener: (bbox: BBox) => void): void {
    this.viewportListeners.push(listener);
  }

  onFeatureClick(listener: (featureId: string) => void): void {
    this.clickListeners.push(listener);
  }

  showResults(collection: FeatureCollection, colorOf: (concept: string) => string): number {
    this.clearResults();
    const layer = L.geoJSON(collection as never, {
      style: (feature) => ({
        color: colorOf(String(feature?.properties?.concept ?? '')),
        weight: 3,
        fillOpacity: 0.35,
      }),
      pointToLayer: (feature, latlng) =>
        L.circleMarker(latlng, {
          radius: 8,
          color: colorOf(String(feature?.properties?.concept ?? '')),
          fillOpacity: 0.8,
        }),
      onEachFeature: (feature, featureLayer) => {
        const name = feature?.properties?.name;
        if (name) featureLayer.bindTooltip(String(name));
        featureLayer.on('click', () => {
          const id = (feature as { id?: string | number }).id;
          if (id !== undefined) {
            for (const listener of this.clickListeners) listener(String(id));
          }
        });
      },
    });
    layer.addTo(this.map);
    this.resultsLayer = layer;
    const bounds = layer.getBounds();
    if (bounds.isValid()) this.map.fitBounds(bounds, { maxZoom: 16, padding: [24, 24] });
    return collection.features.length;
  }

  clearResults(): void {
    this.resultsLayer?.remove();
    this.resultsLayer = null;
  }

  showRelated(entries: RelatedEntry[]): void {
    this.clearRelated();
    const group = L.layerGroup();
    for (const entry of entries) {
      const layer = L.geoJSON(entry.feature as never, {
        style: { color: '#222222', weight: 2, dashArray: '6 4', fillOpacity: 0.15 },
        pointToLayer: (_feature, latlng) =>
          L.circleMarker(latlng, { radius: 7, color: '#222222', dashArray: '4 3', fillOpacity: 0.4 }),
      });
      const name = entry.feature.properties?.name ?? entry.feature.id;
      layer.bindTooltip(`${entry.relation}: ${name}`);
      group.addLayer(layer);
    }
    group.addTo(this.map);
    this.relatedLayer = group;
  }

  clearRelated(): void {
    this.relatedLayer?.remove();
    this.relatedLayer = null;
  }

  fitTo(bbox: BBox): void {
    this.map.fitBounds(
      [
        [bbox.minLat, bbox.minLon],
        [bbox.maxLat, bbox.maxLon],
      ],
      { maxZoom: 16 },
    );
  }
}

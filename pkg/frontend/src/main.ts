import 'leaflet/dist/leaflet.css';
import './styles.css';
import { ApiClient } from './api';
import { SearchApp } from './app';
import { LeafletMap } from './leafletMap';

declare global {
  interface Window {
    MAPSENSE_API_BASE?: string;
    MAPSENSE_TILE_URL?: string;
  }
}

const apiBase = window.MAPSENSE_API_BASE ?? import.meta.env.VITE_API_BASE ?? 'http://127.0.0.1:8000';
const tileUrl =
  window.MAPSENSE_TILE_URL ??
  import.meta.env.VITE_TILE_URL ??
  'https://tile.openstreetmap.org/{z}/{x}/{y}.png';

const mapContainer = document.getElementById('map');
const uiRoot = document.getElementById('ui');
if (!mapContainer || !uiRoot) throw new Error('missing #map / #ui containers');

const map = new LeafletMap(mapContainer, tileUrl, '&copy; OpenStreetMap contributors');
new SearchApp(uiRoot, new ApiClient(apiBase), map);

import type { Api, BBox, Candidate, ItemDetail, QueryResponse, ResultsResponse } from './types';
import type { MapAdapter } from './mapAdapter';
import { conceptColor } from './mapAdapter';

/**
 * The search loop: query box, suggestion menu for ambiguous queries,
 * result overlays, item detail panel with a related-items toggle.
 *
 * Every semantic decision round-trips to the API; the client only renders.
 * The current map viewport rides along as the bounding-box fallback when
 * the query text has no place of its own, and a newer submission always
 * supersedes an older in-flight one (stale responses are dropped).
 */
export class SearchApp {
  private viewport: BBox;
  private lastSubmittedText = '';
  private lastResponse: QueryResponse | null = null;
  private selectedItemId: string | null = null;
  private relatedVisible = false;
  private requestSeq = 0;
  renderedFeatureCount = 0;

  private readonly input: HTMLInputElement;
  private readonly submitButton: HTMLButtonElement;
  private readonly banner: HTMLElement;
  private readonly status: HTMLElement;
  private readonly menu: HTMLElement;
  private readonly detail: HTMLElement;

  constructor(
    root: HTMLElement,
    private readonly api: Api,
    private readonly map: MapAdapter,
  ) {
    root.innerHTML = `
      <header class="topbar">
        <form id="query-form">
          <input id="query-input" type="search" placeholder="cosa cerchi? es. nosocomi pediatrici a Torino" autocomplete="off" />
          <button id="query-submit" type="submit" disabled>Cerca</button>
        </form>
      </header>
      <div id="banner" class="banner" hidden></div>
      <aside class="side">
        <div id="status" class="status"></div>
        <div id="menu" class="menu" hidden></div>
        <div id="detail" class="detail" hidden></div>
      </aside>
    `;
    this.input = root.querySelector('#query-input') as HTMLInputElement;
    this.submitButton = root.querySelector('#query-submit') as HTMLButtonElement;
    this.banner = root.querySelector('#banner') as HTMLElement;
    this.status = root.querySelector('#status') as HTMLElement;
    this.menu = root.querySelector('#menu') as HTMLElement;
    this.detail = root.querySelector('#detail') as HTMLElement;

    this.input.addEventListener('input', () => {
      this.submitButton.disabled = this.input.value.trim() === '';
    });
    (root.querySelector('#query-form') as HTMLFormElement).addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submit(this.input.value);
    });

    this.viewport = map.getViewport();
    map.onViewportChange((bbox) => {
      // remembered for the next query; existing overlays stay put
      this.viewport = bbox;
    });
    map.onFeatureClick((featureId) => {
      void this.showItemDetail(featureId);
    });
  }

  /** Send a query; `selected` carries a disambiguation choice. */
  async submit(text: string, selected: string[] | null = null): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed) return;
    this.lastSubmittedText = trimmed;
    this.hideBanner();
    const seq = ++this.requestSeq;
    let response: QueryResponse;
    try {
      response = await this.api.query(trimmed, this.viewport, selected);
    } catch (error) {
      if ((error as Error)?.name === 'AbortError') return; // superseded
      if (seq === this.requestSeq) this.showBanner(`richiesta fallita: ${String(error)}`);
      return;
    }
    if (seq !== this.requestSeq) return; // a newer submission won
    this.lastResponse = response;
    this.closeDetail();
    switch (response.status) {
      case 'results':
        this.renderResults(response);
        break;
      case 'disambiguation':
        this.renderMenu(response.candidates);
        break;
      case 'no_match':
        this.map.clearResults();
        this.map.clearRelated();
        this.renderedFeatureCount = 0;
        this.menu.hidden = true;
        this.status.textContent = 'Nessun risultato: nessun concetto riconosciuto.';
        break;
      case 'error':
        this.showBanner(response.message);
        break;
    }
  }

  private renderResults(response: ResultsResponse): void {
    this.menu.hidden = true;
    this.map.clearRelated();
    this.relatedVisible = false;
    this.renderedFeatureCount = this.map.showResults(response.features, conceptColor);
    const concepts = response.matched_concepts.join(', ');
    this.status.textContent = `${this.renderedFeatureCount} risultati — ${concepts}`;
  }

  private renderMenu(candidates: Candidate[]): void {
    this.map.clearResults();
    this.map.clearRelated();
    this.renderedFeatureCount = 0;
    this.status.textContent = '';
    this.menu.innerHTML = '<p class="menu-title">Ti suggeriamo:</p>';
    const list = document.createElement('ul');
    for (const candidate of candidates) {
      const item = document.createElement('li');
      const button = document.createElement('button');
      button.type = 'button';
      button.dataset.concept = candidate.concept;
      button.textContent = `${candidate.label} (${candidate.keyword})`;
      button.addEventListener('click', () => {
        // resubmit the original text untouched, plus the chosen concept
        void this.submit(this.lastSubmittedText, [candidate.concept]);
      });
      item.appendChild(button);
      list.appendChild(item);
    }
    this.menu.appendChild(list);
    this.menu.hidden = false;
  }

  async showItemDetail(itemId: string): Promise<void> {
    let detail: ItemDetail;
    try {
      detail = await this.api.itemDetail(itemId);
    } catch (error) {
      this.showBanner(String(error));
      return;
    }
    this.selectedItemId = itemId;
    this.relatedVisible = false;
    this.map.clearRelated();
    const rows = Object.entries(detail.properties)
      .map(([key, value]) => `<tr><th>${escapeHtml(key)}</th><td>${escapeHtml(value)}</td></tr>`)
      .join('');
    this.detail.innerHTML = `
      <h2>${escapeHtml(detail.properties.name ?? detail.id)}</h2>
      <p class="concept-tag">${escapeHtml(detail.concept)}</p>
      <table>${rows}</table>
      <button id="related-toggle" type="button">Mostra/Nascondi elementi correlati</button>
      <ul id="related-list"></ul>
    `;
    (this.detail.querySelector('#related-toggle') as HTMLButtonElement).addEventListener('click', () => {
      void this.toggleRelated();
    });
    this.detail.hidden = false;
  }

  async toggleRelated(): Promise<void> {
    if (!this.selectedItemId) return;
    const list = this.detail.querySelector('#related-list') as HTMLElement;
    if (this.relatedVisible) {
      this.map.clearRelated();
      list.innerHTML = '';
      this.relatedVisible = false;
      return;
    }
    try {
      const response = await this.api.related(this.selectedItemId);
      this.map.showRelated(response.related);
      list.innerHTML = response.related
        .map(
          (entry) =>
            `<li>${escapeHtml(entry.relation)}: ${escapeHtml(entry.feature.properties.name ?? entry.feature.id)}</li>`,
        )
        .join('');
      this.relatedVisible = true;
    } catch (error) {
      this.showBanner(String(error)); // panel stays as it was
    }
  }

  private closeDetail(): void {
    this.detail.hidden = true;
    this.detail.innerHTML = '';
    this.selectedItemId = null;
    this.relatedVisible = false;
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.hidden = false;
  }

  private hideBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = '';
  }

  get state() {
    return {
      viewport: this.viewport,
      lastResponse: this.lastResponse,
      selectedItemId: this.selectedItemId,
      relatedVisible: this.relatedVisible,
    };
  }
}

function escapeHtml(value: string): string {
  return value
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

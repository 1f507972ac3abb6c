/**
 * Browser bootstrap: drag-and-drop loading, panels, sliders, exports.
 * Pure glue; everything testable lives in the modules this wires up.
 */

import { ApiClient } from './api.js';
import { App } from './app.js';
import { GraphView } from './graphview.js';
import { SplomModel, SplomView } from './splom.js';
import { Timeline } from './timeline.js';
import { vectorRange } from './filters.js';
import type { GeneratorSpecJson, MeasureId } from './types.js';

const api = new ApiClient('');
const panelHost = document.querySelector('#panel')!;
const viewHost = document.querySelector('#view')!;
const timelineHost = document.querySelector('#timeline')!;
const splomHost = document.querySelector('#splom')!;
const toast = document.querySelector('#toast') as HTMLElement;
const slider = document.querySelector('#degree-slider') as HTMLInputElement;
const sliderValue = document.querySelector('#degree-value') as HTMLElement;

const app = new App(api, panelHost);
let view: GraphView | null = null;
let timeline: Timeline | null = null;
let splom: SplomView | null = null;

function showError(msg: string): void {
  toast.textContent = msg;
  toast.style.display = 'block';
  setTimeout(() => (toast.style.display = 'none'), 6000);
}

async function openBytes(data: Uint8Array | string, filename?: string): Promise<void> {
  try {
    await app.openFile(data, filename);
  } catch {
    showError(app.lastError ?? 'load failed');
    return; // prior view stays up
  }
  mountViews();
}

function mountViews(): void {
  const state = app.state!;
  viewHost.textContent = '';
  timelineHost.textContent = '';
  splomHost.textContent = '';

  view = new GraphView(viewHost, state, {
    callbacks: {
      onDeleteSelection: () => {
        app.deleteSelection().catch(() => showError(app.lastError ?? 'delete failed'));
      },
      onEditNode: (id) => {
        const node = state.node(id);
        const label = window.prompt('node attrs as key=value', `name=${node?.label ?? ''}`);
        if (!label) return;
        const [k, v] = label.split('=', 2);
        if (!k || v === undefined) return;
        app.updateNodeAttrs(id, { [k]: v }).catch(() => showError(app.lastError ?? 'edit failed'));
      },
    },
  });

  timeline = new Timeline(timelineHost, state);
  app
    .timeline(10)
    .then((hist) => timeline?.setHistogram(hist))
    .catch(() => timeline?.setHistogram(null));

  const degrees = state.vectors.get('degree');
  if (degrees) {
    const [lo, hi] = vectorRange(degrees);
    slider.min = String(lo);
    slider.max = String(hi);
    slider.value = String(lo);
    sliderValue.textContent = String(lo);
  }

  state.onChange(() => splom?.setHighlight(state.selection()));
}

// ---- drag and drop ------------------------------------------------------

const dropzone = document.querySelector('#dropzone') as HTMLElement;
dropzone.addEventListener('dragover', (ev) => {
  ev.preventDefault();
  dropzone.classList.add('over');
});
dropzone.addEventListener('dragleave', () => dropzone.classList.remove('over'));
dropzone.addEventListener('drop', async (ev) => {
  ev.preventDefault();
  dropzone.classList.remove('over');
  const file = (ev as DragEvent).dataTransfer?.files?.[0];
  if (!file) return;
  await openBytes(new Uint8Array(await file.arrayBuffer()), file.name);
});

// ---- slider: client-side per-tick evaluation ------------------------------

slider.addEventListener('input', () => {
  const state = app.state;
  if (!state) return;
  const pos = Number(slider.value);
  sliderValue.textContent = slider.value;
  state.setSlider({ target: 'node', measure: 'degree', op: '>=', position: pos });
});

// ---- scatter matrix --------------------------------------------------------

document.querySelector('#show-splom')?.addEventListener('click', async () => {
  const state = app.state;
  if (!state) return;
  const measures: MeasureId[] = ['degree', 'triangles', 'kcore'];
  for (const m of measures) await app.ensureMeasure(m);
  splomHost.textContent = '';
  const labels = new Map(state.nodeIds().map((id) => [id, state.node(id)?.label ?? String(id)]));
  splom = new SplomView(
    splomHost,
    new SplomModel(measures, state.vectors),
    (ids, extend) => state.select(ids, extend),
    { labels },
  );
});

// ---- generator panel ----------------------------------------------------------

document.querySelector('#generate')?.addEventListener('click', async () => {
  const model = (document.querySelector('#gen-model') as HTMLSelectElement).value;
  const n = Number((document.querySelector('#gen-n') as HTMLInputElement).value) || 8;
  const spec: GeneratorSpecJson =
    model === 'pattern'
      ? { model: 'pattern', kind: 'star', size: n }
      : model === 'pa'
        ? { model: 'pa', n, m: 2 }
        : { model: 'er', n, p: 0.3 };
  const attach = (document.querySelector('#gen-attach') as HTMLInputElement).checked;
  try {
    if (attach && app.state) {
      await app.insertPattern(spec, true);
    } else {
      await app.openGenerated(spec);
      mountViews();
    }
  } catch {
    showError(app.lastError ?? 'generate failed');
  }
});

// ---- exports ---------------------------------------------------------------------

function download(bytes: Uint8Array, name: string, type: string): void {
  const url = URL.createObjectURL(new Blob([bytes as BlobPart], { type }));
  const a = document.createElement('a');
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

document.querySelector('#export-svg')?.addEventListener('click', async () => {
  if (!app.state) return;
  download(await app.exportSvg({ colorBy: 'kcore' }), `${app.graphId}.svg`, 'image/svg+xml');
});

document.querySelector('#export-graphml')?.addEventListener('click', async () => {
  if (!app.state) return;
  download(await app.exportData('graphml'), `${app.graphId}.graphml`, 'application/xml');
});

// client-side rasterization: the server deliberately refuses format=png
document.querySelector('#export-png')?.addEventListener('click', async () => {
  if (!view) return;
  const xml = new XMLSerializer().serializeToString(view.svg);
  const img = new Image();
  img.onload = () => {
    const canvas = document.createElement('canvas');
    canvas.width = img.width || 800;
    canvas.height = img.height || 600;
    canvas.getContext('2d')!.drawImage(img, 0, 0);
    canvas.toBlob((blob) => {
      if (!blob) return;
      const a = document.createElement('a');
      a.href = URL.createObjectURL(blob);
      a.download = `${app.graphId}.png`;
      a.click();
      URL.revokeObjectURL(a.href);
    });
  };
  img.src = `data:image/svg+xml;charset=utf-8,${encodeURIComponent(xml)}`;
});

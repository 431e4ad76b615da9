// Application wiring: events update the ViewState, the state renders the
// panels, superseded requests are aborted (latest wins per panel).

import { ApiClient, LatestWins } from "./api";
import { downloadSnapshot, canExport } from "./export";
import {
  renderCorruptionPanel,
  renderMetricsDashboard,
  renderModelPicker,
  renderSegmentationPanel,
} from "./render";
import { PRESET_RATIOS, ViewState, initialState, toggleModel, withModels, withRatio } from "./state";
import { STYLES } from "./styles";

const DEBOUNCE_MS = 250;

export function startApp(root: HTMLElement, api: ApiClient): void {
  let state: ViewState = initialState();
  const segmentSlot = new LatestWins();
  const corruptSlot = new LatestWins();

  const style = document.createElement("style");
  style.textContent = STYLES;
  document.head.appendChild(style);

  root.innerHTML = `
    <header><h1>toklab playground</h1></header>
    <main>
      <section class="block">
        <h2>Input</h2>
        <textarea id="text-input" rows="2"
          placeholder="Type a word or paste text…"></textarea>
        <div id="model-picker" class="toolbar"></div>
      </section>
      <section class="block"><h2>Segmentation</h2><div id="segmentation"></div></section>
      <section class="block">
        <h2>Corruption preview</h2>
        <div class="toolbar">
          <label>ruleset <input type="text" id="ruleset" value="ru" size="6"></label>
          <label>ratio <select id="ratio-preset">
            ${PRESET_RATIOS.map((r) => `<option value="${r}">${r}</option>`).join("")}
            <option value="custom">custom</option>
          </select></label>
          <input type="number" id="ratio-custom" min="0.01" max="1" step="0.01"
            value="${PRESET_RATIOS[0]}" style="display:none;width:5rem">
          <label>seed <input type="number" id="seed" value="0" style="width:6rem"></label>
          <button id="corrupt-btn">corrupt</button>
        </div>
        <div id="corruption"></div>
      </section>
      <section class="block">
        <h2>Metrics</h2>
        <div class="toolbar">
          <label>corpus id <input type="text" id="corpus-id" size="12"></label>
          <button id="load-report">load report</button>
          <button id="export-btn" disabled>export HTML</button>
        </div>
        <div id="dashboard"></div>
      </section>
    </main>`;

  const el = <T extends HTMLElement>(id: string) => root.querySelector<T>(`#${id}`)!;
  const textInput = el<HTMLTextAreaElement>("text-input");
  const exportBtn = el<HTMLButtonElement>("export-btn");

  function repaint(): void {
    el("model-picker").innerHTML = renderModelPicker(state);
    el("segmentation").innerHTML = renderSegmentationPanel(state);
    el("corruption").innerHTML = renderCorruptionPanel(state);
    el("dashboard").innerHTML = renderMetricsDashboard(state);
    exportBtn.disabled = !canExport(state);
    for (const box of root.querySelectorAll<HTMLInputElement>("input[data-model]")) {
      box.onchange = () => {
        state = toggleModel(state, box.dataset.model!);
        void refreshSegmentation();
        repaint();
      };
    }
  }

  async function refreshSegmentation(): Promise<void> {
    const text = state.text.trim();
    if (!text || state.selectedModelIds.length === 0) {
      state = { ...state, segment: null, errors: { ...state.errors, segment: undefined } };
      repaint();
      return;
    }
    const response = await segmentSlot
      .run((signal) => api.segment(text, state.selectedModelIds, signal))
      .catch((err: Error) => {
        state = { ...state, errors: { ...state.errors, segment: err.message } };
        repaint();
        return null;
      });
    if (response) {
      state = { ...state, segment: response, errors: { ...state.errors, segment: undefined } };
      repaint();
    }
  }

  let debounceTimer: ReturnType<typeof setTimeout> | undefined;
  textInput.addEventListener("input", () => {
    state = { ...state, text: textInput.value };
    clearTimeout(debounceTimer);
    debounceTimer = setTimeout(() => void refreshSegmentation(), DEBOUNCE_MS);
  });

  const ratioPreset = el<HTMLSelectElement>("ratio-preset");
  const ratioCustom = el<HTMLInputElement>("ratio-custom");
  ratioPreset.addEventListener("change", () => {
    if (ratioPreset.value === "custom") {
      ratioCustom.style.display = "";
      state = withRatio(state, Number(ratioCustom.value));
    } else {
      ratioCustom.style.display = "none";
      state = withRatio(state, Number(ratioPreset.value));
    }
  });
  ratioCustom.addEventListener("change", () => {
    state = withRatio(state, Number(ratioCustom.value));
    ratioCustom.value = String(state.ratio);
  });

  el<HTMLButtonElement>("corrupt-btn").addEventListener("click", () => {
    const text = state.text.trim();
    const rulesetId = el<HTMLInputElement>("ruleset").value.trim();
    const seed = Number(el<HTMLInputElement>("seed").value) || 0;
    if (!text || !rulesetId) return;
    void corruptSlot
      .run((signal) => api.corrupt(text, rulesetId, state.ratio, seed, signal))
      .then((result) => {
        if (result) {
          state = { ...state, corruption: result, errors: { ...state.errors, corrupt: undefined } };
          repaint();
        }
      })
      .catch((err: Error) => {
        state = { ...state, errors: { ...state.errors, corrupt: err.message } };
        repaint();
      });
  });

  el<HTMLButtonElement>("load-report").addEventListener("click", () => {
    const corpusId = el<HTMLInputElement>("corpus-id").value.trim();
    if (!corpusId) return;
    void api
      .getReport(corpusId)
      .then((report) => {
        state = { ...state, report, errors: { ...state.errors, report: undefined } };
        repaint();
      })
      .catch((err: Error) => {
        state = { ...state, report: null, errors: { ...state.errors, report: err.message } };
        repaint();
      });
  });

  exportBtn.addEventListener("click", () => downloadSnapshot(state));

  void api
    .getModels()
    .then((models) => {
      state = withModels(state, models);
      repaint();
    })
    .catch((err: Error) => {
      state = { ...state, errors: { ...state.errors, segment: `model list: ${err.message}` } };
      repaint();
    });

  repaint();
}

declare global {
  interface Window {
    toklabStart?: typeof startApp;
  }
}

if (typeof document !== "undefined") {
  window.toklabStart = startApp;
  const root = document.getElementById("app");
  if (root) {
    startApp(root, new ApiClient(""));
  }
}

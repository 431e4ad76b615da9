import type { CorruptionResult, ModelInfo, Report, SegmentResponse } from "./types";

export const PRESET_RATIOS = [0.1, 0.3, 0.5] as const;

export type PanelErrors = {
  segment?: string;
  corrupt?: string;
  report?: string;
};

export type ViewState = {
  text: string;
  models: ModelInfo[];
  selectedModelIds: string[];
  ratio: number;
  seed: number;
  rulesetId: string;
  segment: SegmentResponse | null;
  corruption: CorruptionResult | null;
  report: Report | null;
  errors: PanelErrors;
};

export function initialState(): ViewState {
  return {
    text: "",
    models: [],
    selectedModelIds: [],
    ratio: PRESET_RATIOS[0],
    seed: 0,
    rulesetId: "",
    segment: null,
    corruption: null,
    report: null,
    errors: {},
  };
}

/** Selection is always a subset of the ids the service reported. */
export function withModels(state: ViewState, models: ModelInfo[]): ViewState {
  const available = new Set(models.map((m) => m.model_id));
  const selected = state.selectedModelIds.filter((id) => available.has(id));
  return {
    ...state,
    models,
    selectedModelIds: selected.length > 0 ? selected : models.map((m) => m.model_id),
  };
}

export function toggleModel(state: ViewState, modelId: string): ViewState {
  if (!state.models.some((m) => m.model_id === modelId)) return state;
  const selected = state.selectedModelIds.includes(modelId)
    ? state.selectedModelIds.filter((id) => id !== modelId)
    : [...state.selectedModelIds, modelId];
  return { ...state, selectedModelIds: selected };
}

/** Ratio accepts the presets plus free entry in (0, 1]; invalid input keeps the old value. */
export function withRatio(state: ViewState, ratio: number): ViewState {
  if (!Number.isFinite(ratio) || ratio <= 0 || ratio > 1) return state;
  return { ...state, ratio };
}

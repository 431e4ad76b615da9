// Wire types, mirroring the toklab HTTP service exactly.

export type ModelInfo = {
  model_id: string;
  algorithm: string;
  vocab_size: number;
};

export type WordSegmentation = {
  word: string;
  tokens: string[];
  ids: number[];
  offsets: [number, number][];
  is_unknown: boolean[];
};

export type ModelSegmentation = {
  algorithm: string;
  words: WordSegmentation[];
  word_count: number;
  token_count: number;
  fragmentation: number | null;
};

export type SegmentResponse = {
  text: string;
  results: Record<string, ModelSegmentation>;
};

export type CorruptionResult = {
  text: string;
  corrupted_indices: number[];
  ratio_requested: number;
  ratio_actual: number;
  seed: number;
  warning: string | null;
};

export type MethodRow = {
  method: string;
  vocab_size: number | null;
  oov_rate: number | null;
  semantic_consistency: number | null;
  fragmentation: number | null;
  char_compression: number | null;
  token_compression: number | null;
  reconstruction_rate: number | null;
  ms_per_mtoken: number | null;
  error: string | null;
  token_lengths: Record<string, number> | null;
};

export type ZipfFit = {
  slope: number;
  intercept: number;
  rmse: number;
  points: number;
};

export type ZipfData = {
  fit: ZipfFit | null;
  // [rank, count, log_rank, log_count]
  points: [number, number, number, number][];
};

export type Report = {
  corpus_id: string;
  rows: MethodRow[];
  zipf: ZipfData;
};

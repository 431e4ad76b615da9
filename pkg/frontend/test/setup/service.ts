// Boots a real toklab service with freshly trained fixture models so the
// integration test exercises the UI against actual API payloads.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import type { TestProject } from "vitest/node";

const TRAIN_SNIPPET = `
import json, sys
from pathlib import Path
from toklab.subword import TrainConfig, save_model, train

out = Path(sys.argv[1])
freqs = {"unable": 8, "notable": 5, "unfit": 4, "able": 6, "tables": 3,
         "note": 4, "fit": 3, "un": 2, "table": 2}
for algo in ("bpe", "wordpiece", "unigram"):
    cfg = TrainConfig(algorithm=algo, vocab_size=40, min_frequency=1, seed=42)
    save_model(train(freqs, cfg), out / f"fixture-{algo}.model.json")

from importlib.resources import files
(out / "ru.rules.json").write_text(
    files("toklab.data").joinpath("corruption_ru.json").read_text("utf-8"),
    encoding="utf-8")

report = {
    "corpus_id": "demo",
    "rows": [{
        "method": "fixture-bpe", "vocab_size": 41, "oov_rate": 0.25,
        "semantic_consistency": 0.8, "fragmentation": 1.5,
        "char_compression": 1.0, "token_compression": 1.5,
        "reconstruction_rate": 1.0, "ms_per_mtoken": 120.5, "error": None,
        "token_lengths": {"1": 12, "2": 20, "3": 9},
    }],
    "zipf": {
        "fit": {"slope": -1.02, "intercept": 9.1, "rmse": 0.08, "points": 3},
        "points": [[1, 100, 0.0, 4.605], [2, 50, 0.693, 3.912], [3, 33, 1.098, 3.497]],
    },
}
(out / "demo.report.json").write_text(json.dumps(report), encoding="utf-8")
print("fixtures ready")
`;

let child: ChildProcess | undefined;
let stateDir: string | undefined;

async function waitForHealthz(url: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${url}/healthz`);
      if (res.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up at ${url}: ${lastError}`);
}

export default async function setup(project: TestProject): Promise<() => void> {
  stateDir = mkdtempSync(join(tmpdir(), "toklab-playground-"));
  const trained = spawnSync("python3", ["-c", TRAIN_SNIPPET, stateDir], {
    encoding: "utf-8",
  });
  if (trained.status !== 0) {
    throw new Error(`fixture training failed:\n${trained.stderr}`);
  }

  const port = 20000 + Math.floor(Math.random() * 20000);
  const url = `http://127.0.0.1:${port}`;
  child = spawn(
    "python3",
    ["-m", "toklab.cli", "serve", "--models", stateDir, "--addr", `127.0.0.1:${port}`],
    { stdio: "ignore" },
  );
  await waitForHealthz(url, 30_000);
  project.provide("serviceUrl", url);

  return () => {
    child?.kill("SIGTERM");
    if (stateDir) rmSync(stateDir, { recursive: true, force: true });
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    serviceUrl: string;
  }
}

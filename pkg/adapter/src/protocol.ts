/**
 * The warm-up / evaluate-then-observe loop around a user predictor.
 *
 * Over the training range predictors only receive updates; over validation
 * and test the harness asks for the prediction at t strictly before showing
 * the predictor snapshot t, so no prediction can use its own timestep.
 */

import { LoadedDataset, Pair, pairKey } from "./dataset.js";
import {
  Report,
  ScoreMap,
  TimestepScore,
  f1FromCounts,
  pairCounts,
} from "./metrics.js";

export interface Predictor {
  predict(t: number, numNodes: number): ScoreMap;
  update(t: number, truth: readonly Pair[]): void;
}

export interface ProtocolOptions {
  /** Restrict the candidate universe to pairs incident to this node. */
  pivot?: number | null;
  threshold?: number;
  /** Timesteps to flag in the report (periodic schedule switches). */
  changePoints?: ReadonlySet<number>;
}

/** Reference predictor: score 1 for the previously observed snapshot. */
export class PersistencePredictor implements Predictor {
  private prev: Map<number, number> | null = null;

  predict(): ScoreMap {
    if (this.prev === null) {
      throw new Error("persistence cannot predict before any observation");
    }
    return this.prev;
  }

  update(_t: number, truth: readonly Pair[]): void {
    this.prev = new Map(truth.map(([u, v]) => [pairKey(u, v), 1.0]));
  }
}

/** Reference predictor: score 1 for every pair ever observed. */
export class EdgeBankPredictor implements Predictor {
  private readonly seen = new Map<number, number>();

  predict(): ScoreMap {
    return this.seen;
  }

  update(_t: number, truth: readonly Pair[]): void {
    for (const [u, v] of truth) {
      this.seen.set(pairKey(u, v), 1.0);
    }
  }
}

export function runProtocol(
  ds: LoadedDataset,
  predictor: Predictor,
  options: ProtocolOptions = {},
): Report {
  const pivot = options.pivot ?? null;
  const threshold = options.threshold ?? 0.5;
  const changePoints = options.changePoints ?? new Set<number>();
  const { trainEnd, numTimesteps } = ds.split;

  const step = <T>(what: string, t: number, fn: () => T): T => {
    try {
      return fn();
    } catch (err) {
      throw new Error(`predictor ${what} failed at timestep ${t}: ${String(err)}`, {
        cause: err,
      });
    }
  };

  for (let t = 0; t < trainEnd; t++) {
    step("update", t, () => predictor.update(t, ds.snapshot(t)));
  }
  const rows: TimestepScore[] = [];
  let tp = 0;
  let fp = 0;
  let fn = 0;
  for (let t = trainEnd; t < numTimesteps; t++) {
    const scores = step("predict", t, () => predictor.predict(t, ds.numNodes));
    const counts = pairCounts(scores, ds.edgeKeys(t), threshold, pivot);
    rows.push({
      t,
      f1: f1FromCounts(counts.tp, counts.fp, counts.fn),
      isChangePoint: changePoints.has(t),
    });
    tp += counts.tp;
    fp += counts.fp;
    fn += counts.fn;
    step("update", t, () => predictor.update(t, ds.snapshot(t)));
  }
  return { rows, tp, fp, fn };
}

import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  EdgeBankPredictor,
  LoadedDataset,
  PersistencePredictor,
  Predictor,
  SchemaError,
  ScoreMap,
  StatsMismatchError,
  f1FromCounts,
  iterUtgBatches,
  loadDataset,
  meanAll,
  pairCounts,
  pairKey,
  parseMetricsReport,
  runProtocol,
  utgRowTotal,
  writeMetricsReport,
} from "../src/index.js";

interface FixtureOverrides {
  edges?: string;
  manifest?: Record<string, unknown>;
}

const FIXTURE_EDGES = [
  "t,u,v",
  "0,0,1",
  "0,2,3",
  "1,1,2",
  "2,0,3",
  "2,1,3",
  "3,0,1",
  "",
].join("\n");

function fixtureManifest(): Record<string, unknown> {
  return {
    schema_version: 1,
    task: null,
    num_nodes: 4,
    num_timesteps: 4,
    split: { train_end: 2, val_end: 3, num_timesteps: 4 },
    directed_edge_count: 12,
    roles: {},
    generator: { name: "fixture", version: "0", numpy: "0" },
  };
}

function writeFixture(overrides: FixtureOverrides = {}): string {
  const dir = mkdtempSync(join(tmpdir(), "tgtasks-adapter-"));
  writeFileSync(join(dir, "edges.csv"), overrides.edges ?? FIXTURE_EDGES);
  writeFileSync(
    join(dir, "manifest.json"),
    JSON.stringify(overrides.manifest ?? fixtureManifest()),
  );
  return dir;
}

describe("loadDataset", () => {
  it("loads a valid dataset and exposes snapshots", () => {
    const ds = loadDataset(writeFixture());
    expect(ds.numNodes).toBe(4);
    expect(ds.numTimesteps).toBe(4);
    expect(ds.split).toEqual({ trainEnd: 2, valEnd: 3, numTimesteps: 4 });
    expect(ds.snapshot(0)).toEqual([
      [0, 1],
      [2, 3],
    ]);
    expect(ds.snapshot(1)).toEqual([[1, 2]]);
    expect(ds.edgeKeys(3).has(pairKey(0, 1))).toBe(true);
    expect(() => ds.snapshot(4)).toThrow(RangeError);
  });

  it("rejects a missing manifest", () => {
    const dir = mkdtempSync(join(tmpdir(), "tgtasks-adapter-"));
    writeFileSync(join(dir, "edges.csv"), FIXTURE_EDGES);
    expect(() => loadDataset(dir)).toThrow(SchemaError);
  });

  it("rejects unknown schema versions", () => {
    const manifest = fixtureManifest();
    manifest["schema_version"] = 99;
    expect(() => loadDataset(writeFixture({ manifest }))).toThrow(SchemaError);
  });

  it("rejects a bad edges header", () => {
    const edges = FIXTURE_EDGES.replace("t,u,v", "u,v,t");
    expect(() => loadDataset(writeFixture({ edges }))).toThrow(SchemaError);
  });

  it("detects a deleted edge row via the directed count", () => {
    const edges = FIXTURE_EDGES.replace("1,1,2\n", "");
    expect(() => loadDataset(writeFixture({ edges }))).toThrow(StatsMismatchError);
  });

  it("detects unsorted rows", () => {
    const edges = [
      "t,u,v",
      "0,2,3",
      "0,0,1",
      "1,1,2",
      "2,0,3",
      "2,1,3",
      "3,0,1",
      "",
    ].join("\n");
    expect(() => loadDataset(writeFixture({ edges }))).toThrow(StatsMismatchError);
  });

  it("detects non-canonical pairs", () => {
    const edges = FIXTURE_EDGES.replace("1,1,2", "1,2,1");
    expect(() => loadDataset(writeFixture({ edges }))).toThrow(StatsMismatchError);
  });
});

describe("utg batches", () => {
  it("doubles every edge and reconstructs each snapshot", () => {
    const ds = loadDataset(writeFixture());
    const batches = [...iterUtgBatches(ds)];
    expect(batches).toHaveLength(4);
    expect(batches[0]!.events).toEqual([
      [0, 1],
      [1, 0],
      [2, 3],
      [3, 2],
    ]);
    for (const { t, events } of batches) {
      const rebuilt = new Set(events.map(([u, v]) => pairKey(u, v)));
      expect(rebuilt).toEqual(new Set(ds.edgeKeys(t)));
      expect(events.length).toBe(2 * ds.snapshot(t).length);
    }
  });

  it("row total equals the manifest count", () => {
    const ds = loadDataset(writeFixture());
    expect(utgRowTotal(ds)).toBe(ds.manifest.directed_edge_count);
  });
});

describe("metrics", () => {
  it.each([
    [5, 0, 0, 1.0],
    [1, 1, 1, 0.5],
    [0, 3, 2, 0.0],
    [0, 0, 0, 1.0],
  ])("f1FromCounts(%i,%i,%i) = %f", (tp, fp, fn, expected) => {
    expect(f1FromCounts(tp, fp, fn)).toBe(expected);
  });

  it("applies a strict threshold", () => {
    const truth = new Set([pairKey(0, 1)]);
    const at = new Map([[pairKey(0, 1), 0.5]]);
    expect(pairCounts(at, truth, 0.5)).toEqual({ tp: 0, fp: 0, fn: 1 });
    const above = new Map([[pairKey(0, 1), 0.51]]);
    expect(pairCounts(above, truth, 0.5)).toEqual({ tp: 1, fp: 0, fn: 0 });
  });

  it("restricts the universe to the pivot", () => {
    const truth = new Set([pairKey(0, 1), pairKey(5, 6)]);
    const scores = new Map([
      [pairKey(0, 1), 1.0],
      [pairKey(2, 3), 1.0],
    ]);
    expect(pairCounts(scores, truth, 0.5, 0)).toEqual({ tp: 1, fp: 0, fn: 0 });
    expect(pairCounts(scores, truth, 0.5, 6)).toEqual({ tp: 0, fp: 0, fn: 1 });
  });

  it("round-trips the report format", () => {
    const dir = mkdtempSync(join(tmpdir(), "tgtasks-adapter-"));
    const report = {
      rows: [
        { t: 2, f1: 1.0, isChangePoint: false },
        { t: 3, f1: 0.5, isChangePoint: true },
      ],
      tp: 3,
      fp: 1,
      fn: 2,
    };
    const path = join(dir, "metrics_report.csv");
    writeMetricsReport(report, path);
    const parsed = parseMetricsReport(readFileSync(path, "utf-8"));
    expect(parsed.rows).toEqual(report.rows);
    expect(parsed.footer["mean_all"]).toBe("0.750000000000");
    expect(parsed.footer["mean_changepoints"]).toBe("0.500000000000");
    expect(parsed.footer["tp"]).toBe("3");
  });
});

describe("runProtocol", () => {
  const oracle = (ds: LoadedDataset): Predictor => ({
    predict: (t: number): ScoreMap =>
      new Map([...ds.edgeKeys(t)].map((k) => [k, 1.0])),
    update: () => undefined,
  });

  const silent: Predictor = {
    predict: () => new Map(),
    update: () => undefined,
  };

  it("scores an oracle predictor at 1", () => {
    const ds = loadDataset(writeFixture());
    const report = runProtocol(ds, oracle(ds));
    expect(report.rows.map((r) => r.t)).toEqual([2, 3]);
    expect(meanAll(report)).toBe(1.0);
  });

  it("scores a constant-empty predictor at 0 on nonempty truths", () => {
    const ds = loadDataset(writeFixture());
    const report = runProtocol(ds, silent, { pivot: 0 });
    expect(meanAll(report)).toBe(0.0); // node 0 has an edge at t=2 and t=3
  });

  it("evaluates before observing", () => {
    // Snapshots all differ, so persistence can never score 1.
    const ds = loadDataset(writeFixture());
    const report = runProtocol(ds, new PersistencePredictor());
    for (const row of report.rows) {
      expect(row.f1).toBeLessThan(1.0);
    }
    // t=2 prediction is snapshot 1 = {(1,2)}; truth {(0,3),(1,3)} -> f1 0
    expect(report.rows[0]!.f1).toBe(0.0);
  });

  it("accumulates edge-bank memory through evaluation", () => {
    const ds = loadDataset(writeFixture());
    const bank = new EdgeBankPredictor();
    const report = runProtocol(ds, bank);
    // by t=3 the bank holds every distinct pair seen so far: (0,1) repeats,
    // so 6 rows collapse to 5 remembered pairs
    const last = report.rows[1]!;
    expect(last.t).toBe(3);
    expect(last.f1).toBeGreaterThan(0);
    expect(bank.predict().size).toBe(5);
  });

  it("wraps predictor failures with timestep context", () => {
    const ds = loadDataset(writeFixture());
    const failing: Predictor = {
      predict: () => {
        throw new Error("boom");
      },
      update: () => undefined,
    };
    expect(() => runProtocol(ds, failing)).toThrow(/timestep 2/);
  });
});

export {
  DatasetError,
  LoadedDataset,
  Manifest,
  Pair,
  SchemaError,
  SplitRanges,
  StatsMismatchError,
  TaskInfo,
  keyPair,
  loadDataset,
  pairKey,
} from "./dataset.js";
export { UtgBatch, iterUtgBatches, utgRowTotal } from "./utg.js";
export {
  Counts,
  ParsedReport,
  Report,
  ScoreMap,
  TimestepScore,
  f1FromCounts,
  meanAll,
  meanChangePoints,
  pairCounts,
  parseMetricsReport,
  writeMetricsReport,
} from "./metrics.js";
export {
  EdgeBankPredictor,
  PersistencePredictor,
  Predictor,
  ProtocolOptions,
  runProtocol,
} from "./protocol.js";

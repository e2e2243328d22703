#ifndef BIKECAST_EVAL_HPP
#define BIKECAST_EVAL_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bikecast/features.hpp"
#include "bikecast/hyperparams.hpp"

namespace bikecast {

enum class FoldMode { random, blocked };

struct FoldAssignment {
  size_t n = 0;
  int k = 0;
  std::vector<int> fold_of; // row -> fold id, sizes differ by at most 1
  std::uint64_t seed = 0;
  FoldMode mode = FoldMode::random;
};

// random: seeded permutation chopped into k near-equal folds (matches
// the evaluation protocol here); blocked: contiguous time blocks, the
// leakage-aware alternative for ordered rows.
FoldAssignment kfold_split(size_t n, int k, std::uint64_t seed, FoldMode mode = FoldMode::random);

// Errors are reported in bike space: predictions invert through expm1
// with negatives clamped to zero before differencing.
double mae_bikes(std::span<const double> predictions_log, std::span<const double> actual_bikes);
double max_ae_bikes(std::span<const double> predictions_log, std::span<const double> actual_bikes);

struct MaeSummary {
  std::vector<double> per_station;
  double overall = 0.0; // unweighted mean over stations
};
MaeSummary mae_bikes(const std::vector<std::vector<double>>& predictions_log,
                     const std::vector<std::vector<double>>& actual_bikes);

struct StationScore {
  int station_id = 0;
  double mae = 0.0;
  double max_ae = 0.0;
  size_t rows = 0;
};

struct EvalReport {
  std::string learner;
  int horizon_minutes = 0;
  int memory = 0;
  HyperParams params;
  int k_folds = 5;
  FoldMode fold_mode = FoldMode::random;
  std::uint64_t seed = 0;
  std::vector<StationScore> stations;
  double overall_mae = 0.0;
  double wall_seconds = 0.0;
};

struct CvConfig {
  HyperParams hp;
  int k_folds = 5;
  FoldMode fold_mode = FoldMode::random;
  std::uint64_t seed = 1;
};

// Cross-validated held-out predictions per station; fold f rows are
// predicted by a model fitted on the complementary folds only.
EvalReport evaluate_stations(std::span<const StationDataset> datasets, const CvConfig& cv,
                             int jobs = 1);

// PLSR over region blocks; scores unpack to the member stations.
EvalReport evaluate_regions(std::span<const RegionDataset> datasets, const CvConfig& cv,
                            int jobs = 1);

// MAE per ensemble size from one max-size fit per fold: a prefix of a
// seeded ensemble is exactly the smaller model (see ForestModel /
// BoostModel::predict).
std::vector<double> evaluate_ensemble_curve(std::span<const StationDataset> datasets,
                                            const CvConfig& cv, std::span<const int> sizes,
                                            int jobs = 1);

struct SweepRequest {
  std::string axis;             // horizon | trees | memory
  std::vector<int> grid;        // minutes, tree counts, or memory depths
  std::vector<int> tree_curves; // horizon axis: also emit one curve per count
};

struct SweepResult {
  std::string axis;
  std::vector<int> grid;
  // label -> MAE per grid point; "mae" for the primary curve,
  // "trees=<n>" for per-count curves on a horizon sweep.
  std::map<std::string, std::vector<double>> curves;
  std::vector<EvalReport> reports; // one per grid point (primary curve)
};

struct DataBundle {
  const SnapshotGrid* grid = nullptr;
  std::vector<NeighborSet> neighbors;
  RegionPartition partition; // used when the learner is plsr
  const WeatherIndex* weather = nullptr;
  FeatureOptions options; // horizon/memory overridden per grid point
};

SweepResult run_sweep(const SweepRequest& request, const CvConfig& cv, const DataBundle& data,
                      int jobs = 1);

void write_report_csv(const EvalReport& report, std::ostream& out);
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

} // namespace bikecast

#endif

#include <vector>

#include "doctest.h"
#include "floodsim/matrix.hpp"
#include "floodsim/metrics.hpp"
#include "floodsim/sequence_gen.hpp"

using namespace floodsim;

namespace {

constexpr HazardLabel N = HazardLabel::no_flood;
constexpr HazardLabel W = HazardLabel::some_water;
constexpr HazardLabel F = HazardLabel::flooded;

MatrixSpec small_spec() {
  MatrixSpec spec;
  spec.configs = {*find_ablation("1b"), *find_ablation("4")};
  spec.sequences = {generate_sequence("slow_no_water", 7),
                    generate_sequence("stopped_water", 7)};
  spec.baselines = climate_baselines();
  return spec;
}

}  // namespace

TEST_SUITE("evalkit") {

TEST_CASE("binary metrics on a worked example") {
  // truth flood x4, non-flood x4; one miss, one false alarm.
  const std::vector<HazardLabel> truth{F, F, F, F, N, N, W, W};
  const std::vector<HazardLabel> pred{F, F, F, N, N, F, W, N};
  const ClassificationMetrics m = classification_metrics(pred, truth);
  CHECK(m.flood_precision == doctest::Approx(0.75));
  CHECK(m.flood_recall == doctest::Approx(0.75));
  CHECK(m.macro_f1 == doctest::Approx(0.75));
  CHECK(m.balanced_accuracy == doctest::Approx(0.75));
  CHECK(m.watch_recall == doctest::Approx(0.5));
}

TEST_CASE("absent classes follow the documented conventions") {
  const std::vector<HazardLabel> dry{N, N, N};
  const ClassificationMetrics m = classification_metrics(dry, dry);
  CHECK(m.flood_recall == 1.0);
  CHECK(m.flood_precision == 1.0);
  CHECK(m.watch_recall == 1.0);
  CHECK(m.macro_f1 == 1.0);

  const std::vector<HazardLabel> wet{F, F};
  const std::vector<HazardLabel> missed{N, N};
  const ClassificationMetrics z = classification_metrics(missed, wet);
  CHECK(z.flood_recall == 0.0);
  CHECK(z.flood_precision == 0.0);
}

TEST_CASE("misaligned or empty input is an error") {
  const std::vector<HazardLabel> a{N, F};
  const std::vector<HazardLabel> b{N};
  CHECK_THROWS_AS(classification_metrics(a, b), MetricsError);
  CHECK_THROWS_AS(classification_metrics(std::vector<HazardLabel>{}, std::vector<HazardLabel>{}),
                  MetricsError);
}

TEST_CASE("binarize folds some water into non-flood") {
  const std::vector<HazardLabel> l{N, W, F};
  CHECK(binarize(l) == std::vector<BinaryLabel>{BinaryLabel::non_flood, BinaryLabel::non_flood,
                                                BinaryLabel::flood});
}

TEST_CASE("oscillation counting modes") {
  const std::vector<HazardLabel> l{N, F, N, N, W, W, F};
  CHECK(oscillation_count(l, OscillationMode::flicker) == 1);
  CHECK(oscillation_count(l, OscillationMode::transitions) == 4);
  CHECK(oscillation_count(std::vector<HazardLabel>{}) == 0);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<Millis> v;
  for (Millis i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(percentile_latency(v, 99) == 99);
  CHECK(percentile_latency(v, 100) == 100);
  CHECK(percentile_latency(v, 0) == 1);
  CHECK(percentile_latency(std::vector<Millis>{7}, 99) == 7);
  CHECK_THROWS_AS(percentile_latency(std::vector<Millis>{}, 50), MetricsError);
  CHECK_THROWS_AS(percentile_latency(v, 101), MetricsError);
}

TEST_CASE("iqr filter drops outliers before the percentile") {
  std::vector<Millis> v(20, 100);
  v.push_back(10'000);
  CHECK(percentile_latency(v, 99) == 10'000);
  CHECK(percentile_latency(v, 99, true) == 100);
}

TEST_CASE("run id layout") {
  RunConfig c;
  c.ablation = *find_ablation("4b");
  c.variant = SensorVariant::real_wet;
  c.seed = 3;
  CHECK(run_id("fast_passing", c) == "fast_passing__production_single__real_wet__s3");
}

TEST_CASE("matrix cells are conserved and order independent") {
  const MatrixSpec spec = small_spec();
  const MatrixResult m = run_matrix(spec);
  CHECK(m.failures.empty());
  REQUIRE(m.cells.size() == 4);
  for (const RunMetrics& cell : m.cells) {
    CHECK(cell.decided + cell.dropped + cell.rejected == cell.emitted);
    CHECK(cell.coverage == static_cast<double>(cell.decided) / static_cast<double>(cell.emitted));
  }
  CHECK(cell_seed(1, "4", "stopped_water", SensorVariant::neutral) ==
        cell_seed(1, "4", "stopped_water", SensorVariant::neutral));
  CHECK(cell_seed(1, "4", "stopped_water", SensorVariant::neutral) !=
        cell_seed(1, "4", "slow_no_water", SensorVariant::neutral));

  MatrixSpec reversed = spec;
  std::swap(reversed.configs[0], reversed.configs[1]);
  const MatrixResult r = run_matrix(reversed);
  CHECK(r.cells[0] == m.cells[2]);
}

TEST_CASE("aggregates pool the sequences") {
  const MatrixResult m = run_matrix(small_spec());
  REQUIRE(m.aggregates.size() == 2);
  const AggregateRow& prod = m.aggregates[1];
  CHECK(prod.config_id == "4");
  CHECK(prod.sequences.size() == 2);
  CHECK(prod.total_energy_j == doctest::Approx(m.cells[2].total_energy_j + m.cells[3].total_energy_j));
  CHECK(prod.emitted == m.cells[2].emitted + m.cells[3].emitted);
}

TEST_CASE("matrix json round trip and rendering") {
  const MatrixResult m = run_matrix(small_spec());
  const MatrixResult back = matrix_from_json(matrix_to_json(m));
  CHECK(back.cells == m.cells);
  CHECK(matrix_table(back) == matrix_table(m));
  const std::string table = matrix_table(m);
  CHECK(table.find("Total Energy (J)") != std::string::npos);
  CHECK(table.find("Temporal Coverage") != std::string::npos);
  const std::string csv = matrix_csv(m);
  CHECK(csv.find("production") != std::string::npos);
}

TEST_CASE("metrics json round trip") {
  const MatrixResult m = run_matrix(small_spec());
  for (const RunMetrics& cell : m.cells) {
    CHECK(metrics_from_json(metrics_to_json(cell)) == cell);
  }
}

}

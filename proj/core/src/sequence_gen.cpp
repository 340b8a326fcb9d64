#include "floodsim/sequence_gen.hpp"

#include <algorithm>
#include <random>

#include "floodsim/scenario.hpp"
#include "mix.hpp"

namespace floodsim {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;

struct Script {
  std::string_view id;
  MotionCue motion;
  Millis start_clock_ms;
  // Truth per frame index.
  HazardLabel (*truth)(int i);
  int frames = 31;
  int fault_frame = -1;  // index whose humidity reading is implausible
};

HazardLabel creeping(int i) {
  if (i < 6 || i >= 25) return HazardLabel::no_flood;
  if (i < 10 || i >= 21) return HazardLabel::some_water;
  return HazardLabel::flooded;
}

HazardLabel passing(int i) {
  if (i < 8 || i >= 23) return HazardLabel::no_flood;
  if (i < 11 || i >= 20) return HazardLabel::some_water;
  return HazardLabel::flooded;
}

HazardLabel stopped(int i) {
  return i < 3 ? HazardLabel::some_water : HazardLabel::flooded;
}

HazardLabel constant_flood(int) { return HazardLabel::flooded; }
HazardLabel dry(int) { return HazardLabel::no_flood; }

const Script kScripts[] = {
    {"slow_creeping", MotionCue::slow, 11 * kMillisPerHour, creeping, 41},
    {"fast_passing", MotionCue::fast, 18 * kMillisPerHour, passing, 31, 15},
    {"stopped_water", MotionCue::stopped, 12 * kMillisPerHour + 30 * 60'000, stopped},
    {"stopped_water_2", MotionCue::slow, 5 * kMillisPerHour, constant_flood},
    {"slow_no_water", MotionCue::slow, 23 * kMillisPerHour, dry},
};

struct TierQuality {
  double detect_flood;
  double detect_watch;
  double confidence;
  double extent;  // fraction of the true water area the tier recovers
  double false_positive;
  double glare;  // large reflective false positive
};

constexpr TierQuality kQuality[] = {
    {0.93, 0.80, 0.55, 0.80, 0.10, 0.040},  // nano
    {0.95, 0.85, 0.60, 0.90, 0.07, 0.030},  // small
    {0.96, 0.90, 0.64, 1.00, 0.05, 0.025},  // medium
    {0.98, 0.93, 0.70, 1.00, 0.03, 0.015},  // large
};

// Model 2 is trained on the smallest dataset.
constexpr double kModelDetectPenalty[] = {0.0, 0.08, 0.02};
constexpr double kModelConfidencePenalty[] = {0.0, 0.05, 0.02};
constexpr double kModelFalsePositiveScale[] = {1.0, 1.3, 1.0};

double clamp_conf(double c) { return std::clamp(c, 0.05, 0.95); }

Detection upper_box(std::mt19937_64& rng, double area_lo, double area_hi, double conf_lo,
                    double conf_hi, int model_id) {
  const double area = detail::uniform(rng, area_lo, area_hi) * kWidth * kHeight;
  const double w = std::min(kWidth, std::max(120.0, area / (kHeight / 2.0)) +
                                        detail::uniform(rng, 0.0, 120.0));
  const double h = std::min(kHeight / 2.0, area / w);
  const double x0 = detail::uniform(rng, 0.0, kWidth - w);
  const double y0 = detail::uniform(rng, 0.0, kHeight / 2.0 - h);
  Detection d;
  d.box = {x0, y0, x0 + w, y0 + h};
  d.confidence = clamp_conf(detail::uniform(rng, conf_lo, conf_hi));
  d.model_id = model_id;
  return d;
}

ModelDetections detect(std::mt19937_64& rng, Tier tier, HazardLabel truth,
                       double water_area) {
  const TierQuality& q = kQuality[static_cast<int>(tier)];
  const double p_detect =
      truth == HazardLabel::flooded ? q.detect_flood : q.detect_watch;
  ModelDetections out(kMaxEnsembleSize);
  for (int k = 0; k < kMaxEnsembleSize; ++k) {
    auto& list = out[static_cast<std::size_t>(k)];
    const bool hit = detail::bernoulli(rng, p_detect - kModelDetectPenalty[k]);
    if (water_area > 0.0 && hit) {
      // Water band anchored to the bottom of the frame.
      const double w = 0.8 * kWidth;
      const double h = std::min(kHeight, water_area * q.extent * kWidth * kHeight / w);
      const double x0 = 64.0 + detail::uniform(rng, -4.0, 4.0);
      const double y0 = kHeight - h + detail::uniform(rng, -3.0, 3.0);
      Detection d;
      d.box = {x0, std::max(0.0, y0), x0 + w, kHeight};
      d.confidence = clamp_conf(q.confidence - kModelConfidencePenalty[k] +
                                detail::uniform(rng, -0.06, 0.06));
      d.model_id = k + 1;
      list.push_back(d);
    }
    if (detail::bernoulli(rng, q.false_positive * kModelFalsePositiveScale[k])) {
      list.push_back(upper_box(rng, 0.05, 0.20, 0.30, 0.55, k + 1));
    }
    if (detail::bernoulli(rng, q.glare * kModelFalsePositiveScale[k])) {
      list.push_back(upper_box(rng, 0.25, 0.40, 0.40, 0.60, k + 1));
    }
  }
  return out;
}

const Script& script_for(std::string_view id) {
  for (const Script& s : kScripts) {
    if (s.id == id) return s;
  }
  throw DomainError("unknown sequence '" + std::string(id) + "'");
}

}  // namespace

const std::vector<std::string>& sequence_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const Script& s : kScripts) v.emplace_back(s.id);
    return v;
  }();
  return ids;
}

DiurnalBaselines climate_baselines() {
  DiurnalBaselines b;
  auto set = [&](DiurnalPeriod p, double t, double rh, double hpa) {
    PeriodBaseline& pb = b.at(p);
    pb.temperature_c = t;
    pb.humidity_pct = rh;
    pb.pressure_hpa = hpa;
    pb.sample_count = 500;
    pb.last_update_ms = 0;
  };
  set(DiurnalPeriod::pre_dawn, 12.0, 84.0, 1012.0);
  set(DiurnalPeriod::midday, 24.0, 46.0, 1013.5);
  set(DiurnalPeriod::evening, 19.0, 60.0, 1012.5);
  set(DiurnalPeriod::night, 14.5, 77.0, 1013.0);
  return b;
}

Sequence generate_sequence(std::string_view id, std::uint64_t seed) {
  const Script& script = script_for(id);
  std::mt19937_64 rng(detail::combine(seed, detail::hash_string(id)));
  const DiurnalBaselines climate = climate_baselines();

  Sequence seq;
  seq.id = std::string(id);
  seq.motion = script.motion;
  seq.frame_interval_ms = 1000;
  seq.start_clock_ms = script.start_clock_ms;
  seq.image_width = kWidth;
  seq.image_height = kHeight;

  for (int i = 0; i < script.frames; ++i) {
    SequenceFrame sf;
    sf.truth = script.truth(i);
    FrameMessage& f = sf.frame;
    f.frame_id = i + 1;
    f.sequence_id = seq.id;
    f.motion = script.motion;

    const Millis clock = seq.start_clock_ms + i * seq.frame_interval_ms;
    const PeriodBaseline& c = climate.at(period_of(clock));
    f.sensor.temperature_c = c.temperature_c + detail::uniform(rng, -0.3, 0.3);
    f.sensor.humidity_pct = c.humidity_pct + detail::uniform(rng, -1.5, 1.5);
    f.sensor.pressure_hpa = c.pressure_hpa + detail::uniform(rng, -0.4, 0.4);
    if (i == script.fault_frame) f.sensor.humidity_pct = 104.0;

    double water = 0.0;
    if (sf.truth == HazardLabel::flooded) water = detail::uniform(rng, 0.45, 0.70);
    if (sf.truth == HazardLabel::some_water) water = detail::uniform(rng, 0.04, 0.08);
    for (Tier t : kAllTiers) f.detections_by_tier[t] = detect(rng, t, sf.truth, water);
    seq.frames.push_back(std::move(sf));
  }
  return seq;
}

std::vector<Sequence> generate_sequences(std::uint64_t seed) {
  std::vector<Sequence> out;
  for (const auto& id : sequence_ids()) out.push_back(generate_sequence(id, seed));
  return out;
}

Dataset write_dataset(const std::filesystem::path& data_dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  Dataset ds;
  fs::create_directories(data_dir / "sequences");
  fs::create_directories(data_dir / "scenarios");
  ds.baselines = data_dir / "baselines.txt";
  save_baselines(ds.baselines, climate_baselines());
  for (const Sequence& seq : generate_sequences(seed)) {
    const fs::path seq_path = data_dir / "sequences" / (seq.id + ".jsonl");
    save_sequence(seq_path, seq);
    ds.sequences.push_back(seq_path);

    Scenario sc;
    sc.sequence_path = seq_path;
    sc.baselines_path = ds.baselines;
    const fs::path sc_path = data_dir / "scenarios" / (seq.id + ".json");
    save_scenario(sc_path, sc);
    ds.scenarios.push_back(sc_path);
  }
  return ds;
}

}  // namespace floodsim

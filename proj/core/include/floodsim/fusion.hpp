// Diurnal EWMA sensor baselines and the bounded sensor boost.
#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/domain.hpp"

namespace floodsim {

enum class DiurnalPeriod { pre_dawn = 0, midday = 1, evening = 2, night = 3 };

inline constexpr std::array<DiurnalPeriod, 4> kAllPeriods{
    DiurnalPeriod::pre_dawn, DiurnalPeriod::midday, DiurnalPeriod::evening,
    DiurnalPeriod::night};

inline constexpr Millis kMillisPerHour = 3'600'000;
inline constexpr Millis kMillisPerDay = 24 * kMillisPerHour;

std::string_view to_string(DiurnalPeriod p);
std::optional<DiurnalPeriod> parse_period(std::string_view s);

/// Maps a clock time (ms since midnight, any integer) to its period.
/// Windows: pre_dawn [03,07), midday [10,14), evening [17,21), night [22,03).
/// Times in a gap attach to the nearer window; exact midpoints go to the
/// window that just ended.
DiurnalPeriod period_of(Millis clock_ms);

struct PeriodBaseline {
  double temperature_c = 0.0;
  double humidity_pct = 0.0;
  double pressure_hpa = 0.0;
  long sample_count = 0;
  Millis last_update_ms = 0;

  friend bool operator==(const PeriodBaseline&, const PeriodBaseline&) = default;
};

struct DiurnalBaselines {
  std::array<PeriodBaseline, 4> periods{};
  double tau_hours = 12.0;

  PeriodBaseline& at(DiurnalPeriod p) { return periods[static_cast<int>(p)]; }
  const PeriodBaseline& at(DiurnalPeriod p) const {
    return periods[static_cast<int>(p)];
  }

  friend bool operator==(const DiurnalBaselines&, const DiurnalBaselines&) = default;
};

struct Anomalies {
  double delta_t = 0.0;
  double delta_rh = 0.0;
  double delta_p = 0.0;

  friend bool operator==(const Anomalies&, const Anomalies&) = default;
};

/// EWMA update gated on a NoFlood label. Weight 1 - exp(-dt/tau) uses the
/// virtual time since the period's last update; the first sample seeds.
DiurnalBaselines update_baseline(const DiurnalBaselines& b,
                                 const SensorReading& reading,
                                 HazardLabel label, DiurnalPeriod period);

/// Reading minus the period baseline; zero for an unseeded period.
Anomalies anomalies(const DiurnalBaselines& b, const SensorReading& reading,
                    DiurnalPeriod period);

/// Contributions are held in basis points (1e-4) so sums are exact.
struct BoostRule {
  std::string name;
  std::function<bool(const Anomalies&)> condition;
  int contribution_bp = 0;
};

struct BoostRuleTable {
  std::vector<BoostRule> rules;
  int clamp_min_bp = -800;
  int clamp_max_bp = 2800;

  /// The four flash-flood precursor rules with clamp [-0.08, +0.28].
  static BoostRuleTable defaults();
};

double sensor_boost(const Anomalies& a, const BoostRuleTable& rules);

// Baselines store: one `period.key = value` line per field, '#' comments.
void write_baselines(std::ostream& out, const DiurnalBaselines& b);
DiurnalBaselines read_baselines(std::istream& in);
void save_baselines(const std::filesystem::path& path, const DiurnalBaselines& b);
DiurnalBaselines load_baselines(const std::filesystem::path& path);

}  // namespace floodsim

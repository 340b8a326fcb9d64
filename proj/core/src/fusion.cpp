#include "floodsim/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace floodsim {

std::string_view to_string(DiurnalPeriod p) {
  switch (p) {
    case DiurnalPeriod::pre_dawn: return "pre_dawn";
    case DiurnalPeriod::midday: return "midday";
    case DiurnalPeriod::evening: return "evening";
    case DiurnalPeriod::night: return "night";
  }
  return "midday";
}

std::optional<DiurnalPeriod> parse_period(std::string_view s) {
  for (DiurnalPeriod p : kAllPeriods) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

namespace {

struct Window {
  DiurnalPeriod period;
  Millis begin;  // inclusive, ms since midnight
  Millis end;    // exclusive; may exceed one day for the night window
};

constexpr std::array<Window, 4> kWindows{{
    {DiurnalPeriod::pre_dawn, 3 * kMillisPerHour, 7 * kMillisPerHour},
    {DiurnalPeriod::midday, 10 * kMillisPerHour, 14 * kMillisPerHour},
    {DiurnalPeriod::evening, 17 * kMillisPerHour, 21 * kMillisPerHour},
    {DiurnalPeriod::night, 22 * kMillisPerHour, 27 * kMillisPerHour},
}};

Millis wrap_day(Millis t) {
  t %= kMillisPerDay;
  return t < 0 ? t + kMillisPerDay : t;
}

bool inside(const Window& w, Millis t) {
  return (t >= w.begin && t < w.end) ||
         (t + kMillisPerDay >= w.begin && t + kMillisPerDay < w.end);
}

}  // namespace

DiurnalPeriod period_of(Millis clock_ms) {
  const Millis t = wrap_day(clock_ms);
  for (const Window& w : kWindows) {
    if (inside(w, t)) return w.period;
  }
  // In a gap: compare time since the previous window ended with the time
  // until the next one begins.
  for (std::size_t i = 0; i < kWindows.size(); ++i) {
    const Window& prev = kWindows[i];
    const Window& next = kWindows[(i + 1) % kWindows.size()];
    const Millis prev_end = wrap_day(prev.end);
    const Millis next_begin = next.begin;
    if (t >= prev_end && t < next_begin) {
      return (t - prev_end) <= (next_begin - t) ? prev.period : next.period;
    }
  }
  return DiurnalPeriod::midday;  // unreachable: windows and gaps tile the day
}

DiurnalBaselines update_baseline(const DiurnalBaselines& b,
                                 const SensorReading& reading,
                                 HazardLabel label, DiurnalPeriod period) {
  if (label != HazardLabel::no_flood) return b;
  DiurnalBaselines out = b;
  PeriodBaseline& pb = out.at(period);
  if (pb.sample_count == 0) {
    pb.temperature_c = reading.temperature_c;
    pb.humidity_pct = reading.humidity_pct;
    pb.pressure_hpa = reading.pressure_hpa;
  } else {
    const double dt_hours =
        static_cast<double>(std::max<Millis>(0, reading.timestamp - pb.last_update_ms)) /
        static_cast<double>(kMillisPerHour);
    const double alpha = 1.0 - std::exp(-dt_hours / b.tau_hours);
    pb.temperature_c += alpha * (reading.temperature_c - pb.temperature_c);
    pb.humidity_pct += alpha * (reading.humidity_pct - pb.humidity_pct);
    pb.pressure_hpa += alpha * (reading.pressure_hpa - pb.pressure_hpa);
  }
  pb.sample_count += 1;
  pb.last_update_ms = std::max(pb.last_update_ms, reading.timestamp);
  return out;
}

Anomalies anomalies(const DiurnalBaselines& b, const SensorReading& reading,
                    DiurnalPeriod period) {
  const PeriodBaseline& pb = b.at(period);
  if (pb.sample_count == 0) return {};
  return Anomalies{reading.temperature_c - pb.temperature_c,
                   reading.humidity_pct - pb.humidity_pct,
                   reading.pressure_hpa - pb.pressure_hpa};
}

BoostRuleTable BoostRuleTable::defaults() {
  BoostRuleTable t;
  t.rules = {
      {"humidity_rise_cooling",
       [](const Anomalies& a) { return a.delta_rh > 15.0 && a.delta_t < -1.5; },
       800},
      {"temperature_drop", [](const Anomalies& a) { return a.delta_t < -2.5; },
       400},
      {"pressure_fall", [](const Anomalies& a) { return a.delta_p < -5.0; }, 200},
      {"hot_very_dry",
       [](const Anomalies& a) { return a.delta_rh < -20.0 && a.delta_t > 3.0; },
       -800},
  };
  t.clamp_min_bp = -800;
  t.clamp_max_bp = 2800;
  return t;
}

double sensor_boost(const Anomalies& a, const BoostRuleTable& table) {
  int total_bp = 0;
  for (const BoostRule& rule : table.rules) {
    if (rule.condition(a)) total_bp += rule.contribution_bp;
  }
  total_bp = std::clamp(total_bp, table.clamp_min_bp, table.clamp_max_bp);
  return static_cast<double>(total_bp) / 10000.0;
}

void write_baselines(std::ostream& out, const DiurnalBaselines& b) {
  out << "# diurnal baselines (EWMA, No-Flood frames only)\n";
  out << "tau_hours = " << text::format_double(b.tau_hours) << '\n';
  for (DiurnalPeriod p : kAllPeriods) {
    const PeriodBaseline& pb = b.at(p);
    const std::string key(to_string(p));
    out << key << ".temperature_c = " << text::format_double(pb.temperature_c) << '\n';
    out << key << ".humidity_pct = " << text::format_double(pb.humidity_pct) << '\n';
    out << key << ".pressure_hpa = " << text::format_double(pb.pressure_hpa) << '\n';
    out << key << ".sample_count = " << pb.sample_count << '\n';
    out << key << ".last_update_ms = " << pb.last_update_ms << '\n';
  }
}

DiurnalBaselines read_baselines(std::istream& in) {
  DiurnalBaselines b;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("baselines line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string_view key = text::trim(trimmed.substr(0, eq));
    const std::string_view value = text::trim(trimmed.substr(eq + 1));
    auto fail = [&] {
      throw DomainError("baselines line " + std::to_string(line_no) +
                        ": bad entry '" + std::string(key) + "'");
    };
    if (key == "tau_hours") {
      if (!text::parse_double(value, b.tau_hours) || !(b.tau_hours > 0.0)) fail();
      continue;
    }
    const auto dot = key.find('.');
    if (dot == std::string_view::npos) fail();
    const auto period = parse_period(key.substr(0, dot));
    if (!period) fail();
    PeriodBaseline& pb = b.at(*period);
    const std::string_view field = key.substr(dot + 1);
    bool ok = false;
    if (field == "temperature_c") ok = text::parse_double(value, pb.temperature_c);
    else if (field == "humidity_pct") ok = text::parse_double(value, pb.humidity_pct);
    else if (field == "pressure_hpa") ok = text::parse_double(value, pb.pressure_hpa);
    else if (field == "sample_count") ok = text::parse_int(value, pb.sample_count);
    else if (field == "last_update_ms") ok = text::parse_int(value, pb.last_update_ms);
    if (!ok) fail();
  }
  for (DiurnalPeriod p : kAllPeriods) {
    const PeriodBaseline& pb = b.at(p);
    if (pb.sample_count < 0) throw DomainError("baselines: negative sample_count");
    if (pb.sample_count > 0) {
      SensorReading probe{pb.temperature_c, pb.humidity_pct, pb.pressure_hpa, 0};
      if (auto bad = check_sensor(probe)) {
        throw DomainError("baselines: " + std::string(to_string(p)) + " " +
                          bad->reason);
      }
    }
  }
  return b;
}

void save_baselines(const std::filesystem::path& path, const DiurnalBaselines& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write baselines: " + path.string());
  write_baselines(out, b);
}

DiurnalBaselines load_baselines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read baselines: " + path.string());
  return read_baselines(in);
}

}  // namespace floodsim

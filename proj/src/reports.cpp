#include "steerlab/harness/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "steerlab/harness/io.hpp"

namespace steerlab::harness {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string axes_field(const std::vector<Vec3>& axes) {
  std::string out;
  for (size_t i = 0; i < axes.size(); ++i) {
    if (i) out += ';';
    out += fmt(axes[i][0]) + " " + fmt(axes[i][1]) + " " + fmt(axes[i][2]);
  }
  return out;
}

std::string outcome_fields(const InequalityOutcome& o) {
  if (!o.present) return ",,,";
  return "," + fmt(o.value) + "," + fmt(o.bound) + "," + (o.violated ? std::string("1") : "0");
}

struct Stats {
  double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
  size_t count = 0;
};

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  s.count = v.size();
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double sq = 0.0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(sq / (v.size() - 1)) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

json stats_json(const Stats& s) {
  json j;
  j["count"] = s.count;
  j["mean"] = io::round_sig(s.mean);
  j["std"] = io::round_sig(s.stddev);
  j["min"] = io::round_sig(s.min);
  j["max"] = io::round_sig(s.max);
  return j;
}

json criterion_json(const CampaignResult& result, InequalityOutcome TrialRecord::*member) {
  std::vector<double> values;
  size_t present = 0, violated = 0;
  for (const TrialRecord& r : result.records) {
    const InequalityOutcome& o = r.*member;
    if (!o.present) continue;
    ++present;
    values.push_back(o.value);
    if (o.violated) ++violated;
  }
  if (present == 0) return nullptr;
  json j = stats_json(stats_of(values));
  j["violation_fraction"] = io::round_sig(static_cast<double>(violated) / present);
  return j;
}

std::string svg_header(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
        "viewBox=\"0 0 640 400\">\n"
     << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
     << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << title << "</text>\n";
  return os.str();
}

}  // namespace

void write_results_csv(const CampaignResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "trial_index,combo_index,mu,signalling_raw,t,asr_status,asr_value,raw_asr_status,"
         "sr_value,ls_value,ls_bound,ls_violated,chsh_value,chsh_bound,chsh_violated,"
         "dbs_value,dbs_bound,dbs_violated,ris_value,ris_bound,ris_violated,"
         "alice_axes,bob_axes\n";
  for (const TrialRecord& r : result.records) {
    out << r.trial_index << ',' << r.combo_index << ',' << fmt(r.mu) << ','
        << fmt(r.signalling_raw) << ',' << fmt(r.t) << ',' << conic::to_string(r.asr_status)
        << ',' << fmt(r.asr_value) << ','
        << (r.raw_asr_status ? conic::to_string(*r.raw_asr_status) : std::string()) << ','
        << (r.sr_value ? fmt(*r.sr_value) : std::string()) << outcome_fields(r.ls)
        << outcome_fields(r.chsh) << outcome_fields(r.dbs) << outcome_fields(r.ris) << ','
        << axes_field(r.alice_axes) << ',' << axes_field(r.bob_axes) << '\n';
  }
}

json summarize(const CampaignResult& result) {
  const CampaignConfig& cfg = result.config;
  json j;
  j["mode"] = to_string(cfg.mode);
  j["n_settings"] = cfg.n_settings;
  j["trials"] = cfg.effective_trials();
  j["seed"] = cfg.seed;
  j["shots"] = cfg.shots ? json(*cfg.shots) : json(nullptr);
  j["sampler"] = cfg.sampler.mode == SamplerMode::HaarRotation ? "haar" : "fibonacci";
  j["aligned"] = cfg.aligned;
  j["exclude_orthogonal_plane_pairs"] = cfg.exclude_orthogonal_plane_pairs;
  j["records"] = result.records.size();

  std::vector<double> asr_values, t_values, sr_values;
  size_t optimal = 0, unbounded = 0, violated = 0;
  for (const TrialRecord& r : result.records) {
    t_values.push_back(r.t);
    if (r.asr_status == conic::Status::Optimal) {
      ++optimal;
      asr_values.push_back(r.asr_value);
    } else if (r.asr_status == conic::Status::Unbounded) {
      ++unbounded;
    }
    if (r.asr_violated()) ++violated;
    if (r.sr_value) sr_values.push_back(*r.sr_value);
  }
  json asr = stats_json(stats_of(asr_values));
  asr["optimal"] = optimal;
  asr["unbounded"] = unbounded;
  asr["violation_fraction"] =
      result.records.empty()
          ? 0.0
          : io::round_sig(static_cast<double>(violated) / result.records.size());
  j["asr"] = std::move(asr);
  j["t"] = stats_json(stats_of(t_values));
  if (!sr_values.empty()) j["sr"] = stats_json(stats_of(sr_values));

  json criteria;
  if (json c = criterion_json(result, &TrialRecord::ls); !c.is_null()) criteria["LS"] = c;
  if (json c = criterion_json(result, &TrialRecord::chsh); !c.is_null()) criteria["CHSH-LS"] = c;
  if (json c = criterion_json(result, &TrialRecord::dbs); !c.is_null()) criteria["DBS"] = c;
  if (json c = criterion_json(result, &TrialRecord::ris); !c.is_null()) criteria["RIS"] = c;
  j["criteria"] = std::move(criteria);

  if (cfg.mode == CampaignMode::SweepMu) {
    std::map<double, std::vector<const TrialRecord*>> by_mu;
    for (const TrialRecord& r : result.records) by_mu[r.mu].push_back(&r);
    json rows = json::array();
    for (const auto& [mu, recs] : by_mu) {
      std::vector<double> values;
      size_t steered = 0;
      for (const TrialRecord* r : recs) {
        if (r->asr_status == conic::Status::Optimal) values.push_back(r->asr_value);
        if (r->asr_violated()) ++steered;
      }
      json row;
      row["mu"] = io::round_sig(mu);
      row["mean_asr"] = io::round_sig(stats_of(values).mean);
      row["violation_fraction"] = io::round_sig(static_cast<double>(steered) / recs.size());
      rows.push_back(std::move(row));
    }
    j["by_mu"] = std::move(rows);
  }

  double total_ms = 0.0;
  for (const TrialRecord& r : result.records) total_ms += r.wall_time_ms;
  j["total_wall_time_ms"] = io::round_sig(total_ms);
  return j;
}

std::string histogram_svg(const std::vector<double>& values, const std::string& title) {
  std::ostringstream os;
  os << svg_header(title);
  if (!values.empty()) {
    const double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) hi = lo + 1e-12;
    const int bins = 40;
    std::vector<int> counts(bins, 0);
    for (double v : values) {
      int k = static_cast<int>((v - lo) / (hi - lo) * bins);
      counts[std::clamp(k, 0, bins - 1)]++;
    }
    const int peak = *std::max_element(counts.begin(), counts.end());
    const double x0 = 60, y0 = 350, width = 540, height = 290;
    const double bw = width / bins;
    for (int k = 0; k < bins; ++k) {
      const double bh = peak > 0 ? height * counts[k] / peak : 0.0;
      os << "<rect x=\"" << fmt(x0 + k * bw) << "\" y=\"" << fmt(y0 - bh) << "\" width=\""
         << fmt(bw - 1) << "\" height=\"" << fmt(bh) << "\" fill=\"#4878cf\"/>\n";
    }
    os << "<line x1=\"60\" y1=\"350\" x2=\"600\" y2=\"350\" stroke=\"black\"/>\n"
       << "<text x=\"60\" y=\"370\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(lo)
       << "</text>\n"
       << "<text x=\"600\" y=\"370\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << fmt(hi) << "</text>\n"
       << "<text x=\"40\" y=\"70\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << peak << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string bars_svg(const std::vector<std::pair<std::string, double>>& bars,
                     const std::string& title) {
  std::ostringstream os;
  os << svg_header(title);
  if (!bars.empty()) {
    const double x0 = 60, y0 = 350, width = 540, height = 290;
    const double bw = width / bars.size();
    for (size_t k = 0; k < bars.size(); ++k) {
      const double frac = std::clamp(bars[k].second, 0.0, 1.0);
      const double bh = height * frac;
      const double x = x0 + k * bw;
      os << "<rect x=\"" << fmt(x + bw * 0.15) << "\" y=\"" << fmt(y0 - bh) << "\" width=\""
         << fmt(bw * 0.7) << "\" height=\"" << fmt(bh) << "\" fill=\"#cf6848\"/>\n"
         << "<text x=\"" << fmt(x + bw / 2) << "\" y=\"370\" text-anchor=\"middle\" "
            "font-family=\"sans-serif\" font-size=\"12\">"
         << bars[k].first << "</text>\n"
         << "<text x=\"" << fmt(x + bw / 2) << "\" y=\"" << fmt(y0 - bh - 6)
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         << fmt(frac) << "</text>\n";
    }
    os << "<line x1=\"60\" y1=\"350\" x2=\"600\" y2=\"350\" stroke=\"black\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

std::vector<std::pair<std::string, double>> fraction_bars(const json& summary) {
  std::vector<std::pair<std::string, double>> bars;
  if (summary.contains("asr") && summary["asr"].contains("violation_fraction")) {
    bars.emplace_back("ASR", summary["asr"]["violation_fraction"].get<double>());
  }
  if (summary.contains("criteria")) {
    for (const char* name : {"LS", "CHSH-LS", "DBS", "RIS"}) {
      if (summary["criteria"].contains(name)) {
        bars.emplace_back(name, summary["criteria"][name]["violation_fraction"].get<double>());
      }
    }
  }
  return bars;
}

std::vector<double> asr_values_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty results file");
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 7) continue;
    if (fields[5] == "optimal") values.push_back(std::stod(fields[6]));
  }
  return values;
}

void write_charts(const std::string& dir, const json& summary) {
  namespace fs = std::filesystem;
  const std::string mode = summary.value("mode", "");
  if (mode == "histogram" || mode == "sweep-mu") {
    const auto values = asr_values_from_csv((fs::path(dir) / "results.csv").string());
    write_text((fs::path(dir) / "histogram.svg").string(),
               histogram_svg(values, "ASR distribution"));
  }
  write_text((fs::path(dir) / "bars.svg").string(),
             bars_svg(fraction_bars(summary), "Violation fractions"));
}

}  // namespace

void write_results(const CampaignResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir = result.config.output_dir.empty() ? fs::path(".")
                                                        : fs::path(result.config.output_dir);
  fs::create_directories(dir);
  write_results_csv(result, (dir / "results.csv").string());
  const json summary = summarize(result);
  write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
  write_charts(dir.string(), summary);
}

void emit_reports(const std::string& dir, const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  for (const std::string& format : formats) {
    if (format != "csv" && format != "json" && format != "svg") {
      throw std::invalid_argument("unknown report format: " + format);
    }
  }
  for (const std::string& format : formats) {
    if (format == "csv" || format == "json") {
      const fs::path target = base / (format == "csv" ? "results.csv" : "summary.json");
      if (!fs::exists(target)) {
        throw std::runtime_error(target.string() + ": missing from results directory");
      }
    } else {
      std::ifstream in(base / "summary.json");
      if (!in) throw std::runtime_error((base / "summary.json").string() + ": cannot open");
      json summary;
      in >> summary;
      write_charts(dir, summary);
    }
  }
}

}  // namespace steerlab::harness

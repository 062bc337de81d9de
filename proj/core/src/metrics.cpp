#include "swarmpatrol/metrics.hpp"

#include <algorithm>
#include <fstream>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

IdlenessLedger::IdlenessLedger(std::vector<int> viewpoint_ids)
    : ids_(std::move(viewpoint_ids)) {
  last_visit_.assign(ids_.size(), 0.0);
  first_visit_.assign(ids_.size(), -1.0);
  visits_.assign(ids_.size(), 0);
  unvisited_ = static_cast<int>(ids_.size());
}

int IdlenessLedger::index_of(int vp_id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), vp_id);
  if (it == ids_.end())
    throw InvariantError("unknown viewpoint id " + std::to_string(vp_id));
  return static_cast<int>(it - ids_.begin());
}

void IdlenessLedger::record_visit(int vp_id, double t) {
  const int i = index_of(vp_id);
  last_visit_[i] = t;
  if (visits_[i] == 0) {
    first_visit_[i] = t;
    if (--unvisited_ == 0) coverage_time_ = t;
  }
  ++visits_[i];
}

double IdlenessLedger::idleness(int vp_id, double t) const {
  return t - last_visit_[index_of(vp_id)];
}

double IdlenessLedger::max_idleness(double t) const {
  double worst = 0.0;
  for (const double lv : last_visit_) worst = std::max(worst, t - lv);
  return worst;
}

void IdlenessLedger::sample(double t) { series_.emplace_back(t, max_idleness(t)); }

int IdlenessLedger::visit_count(int vp_id) const { return visits_[index_of(vp_id)]; }

std::optional<double> IdlenessLedger::mean_revisit_interval(int vp_id) const {
  const int i = index_of(vp_id);
  if (visits_[i] < 2) return std::nullopt;
  return (last_visit_[i] - first_visit_[i]) / (visits_[i] - 1);
}

std::optional<double> IdlenessLedger::peak_after(double t) const {
  std::optional<double> peak;
  for (const auto& [st, v] : series_) {
    if (st < t) continue;
    if (!peak || v > *peak) peak = v;
  }
  return peak;
}

void write_timeseries_csv(const std::string& path, const std::string& run_id,
                          const IdlenessLedger& ledger) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "run_id,time_s,max_idleness_s\n";
  for (const auto& [t, v] : ledger.series()) {
    out << run_id << ',' << fmt_fixed(t, 1) << ',' << fmt_fixed(v, 3) << '\n';
  }
}

void write_per_viewpoint_csv(const std::string& path, const IdlenessLedger& ledger) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "viewpoint_id,visit_count,mean_revisit_interval_s\n";
  for (const int id : ledger.viewpoint_ids()) {
    out << id << ',' << ledger.visit_count(id) << ',';
    if (const auto m = ledger.mean_revisit_interval(id)) out << fmt_fixed(*m, 3);
    out << '\n';
  }
}

void write_idleness_svg(const std::string& path, const IdlenessLedger& ledger) {
  const auto& series = ledger.series();
  const double w = 800.0, h = 300.0, margin = 45.0;
  double t_max = 1.0, v_max = 1.0;
  for (const auto& [t, v] : series) {
    t_max = std::max(t_max, t);
    v_max = std::max(v_max, v);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_fixed(w, 0)
      << "\" height=\"" << fmt_fixed(h, 0) << "\" viewBox=\"0 0 "
      << fmt_fixed(w, 0) << ' ' << fmt_fixed(h, 0) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  out << "<line x1=\"" << fmt_fixed(margin, 0) << "\" y1=\""
      << fmt_fixed(h - margin, 0) << "\" x2=\"" << fmt_fixed(w - 10, 0)
      << "\" y2=\"" << fmt_fixed(h - margin, 0)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << fmt_fixed(margin, 0) << "\" y1=\""
      << fmt_fixed(h - margin, 0) << "\" x2=\"" << fmt_fixed(margin, 0)
      << "\" y2=\"10\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt_fixed(w / 2, 0) << "\" y=\"" << fmt_fixed(h - 8, 0)
      << "\" font-size=\"12\" text-anchor=\"middle\">time (s), 0 to "
      << fmt_fixed(t_max, 0) << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt_fixed(h / 2, 0)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt_fixed(h / 2, 0) << ")\">max idleness (s), 0 to "
      << fmt_fixed(v_max, 0) << "</text>\n";
  if (!series.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1c5d99\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series.size(); ++i) {
      const double x = margin + (w - margin - 10.0) * series[i].first / t_max;
      const double y = (h - margin) - (h - margin - 10.0) * series[i].second / v_max;
      if (i) out << ' ';
      out << fmt_fixed(x, 2) << ',' << fmt_fixed(y, 2);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace swarmpatrol

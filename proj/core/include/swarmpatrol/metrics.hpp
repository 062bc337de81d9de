#ifndef SWARMPATROL_METRICS_HPP_
#define SWARMPATROL_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace swarmpatrol {

// Per-viewpoint visit bookkeeping. Every viewpoint starts with an implicit
// last-visit time of zero, so idleness climbs from scenario start until the
// first real service.
class IdlenessLedger {
 public:
  explicit IdlenessLedger(std::vector<int> viewpoint_ids);

  void record_visit(int vp_id, double t);  // unknown id throws
  void sample(double t);                   // appends to the 1 Hz series

  double idleness(int vp_id, double t) const;
  double max_idleness(double t) const;
  std::optional<double> coverage_complete_time() const { return coverage_time_; }

  const std::vector<std::pair<double, double>>& series() const { return series_; }
  const std::vector<int>& viewpoint_ids() const { return ids_; }
  int visit_count(int vp_id) const;

  // Mean gap between consecutive recorded visits; empty below two visits.
  std::optional<double> mean_revisit_interval(int vp_id) const;

  // Largest sampled max-idleness at or after the given time.
  std::optional<double> peak_after(double t) const;

 private:
  int index_of(int vp_id) const;

  std::vector<int> ids_;
  std::vector<double> last_visit_;
  std::vector<double> first_visit_;
  std::vector<int> visits_;
  std::vector<std::pair<double, double>> series_;
  std::optional<double> coverage_time_;
  int unvisited_ = 0;
};

// Output writers. All numbers fixed-format so identical runs produce
// identical bytes.
void write_timeseries_csv(const std::string& path, const std::string& run_id,
                          const IdlenessLedger& ledger);
void write_per_viewpoint_csv(const std::string& path, const IdlenessLedger& ledger);
void write_idleness_svg(const std::string& path, const IdlenessLedger& ledger);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_METRICS_HPP_

#include "swarmpatrol/allocation.hpp"

#include <algorithm>
#include <unordered_set>

#include "swarmpatrol/errors.hpp"

namespace swarmpatrol {

namespace {

bool entry_before(const WinnerEntry& a, const WinnerEntry& b) {
  if (a.bid != b.bid) return a.bid > b.bid;
  return a.agent_id < b.agent_id;
}

using TimeVec = std::vector<std::pair<int, double>>;

TimeVec::const_iterator time_lookup(const TimeVec& v, int agent) {
  return std::lower_bound(
      v.begin(), v.end(), agent,
      [](const std::pair<int, double>& p, int a) { return p.first < a; });
}

}  // namespace

double allocation_score(const Vec3& agent_pos, const TaskFacts& task) {
  const double d2 = std::max((agent_pos - task.centroid).squaredNorm(), 1.0);
  return task.priority + 1.0 / d2;
}

AllocationState::AllocationState(int agent_id, std::vector<TaskFacts> tasks)
    : agent_id_(agent_id), tasks_(std::move(tasks)) {
  winners_.resize(tasks_.size());
}

int AllocationState::best_open_task(const Vec3& pos, double* score_out) const {
  int best = -1;
  double best_score = 0.0;
  for (size_t j = 0; j < tasks_.size(); ++j) {
    const double s = allocation_score(pos, tasks_[j]);
    if (static_cast<int>(winners_[j].size()) >= tasks_[j].capacity) {
      const WinnerEntry& weakest = winners_[j].back();
      const bool beats = s > weakest.bid ||
                         (s == weakest.bid && agent_id_ < weakest.agent_id);
      if (!beats) continue;
    }
    if (best == -1 || s > best_score) {
      best = static_cast<int>(j);
      best_score = s;
    }
  }
  if (best >= 0 && score_out) *score_out = best_score;
  return best;
}

bool AllocationState::wants_to_bid(const Vec3& pos) const {
  return my_task_ < 0 && best_open_task(pos, nullptr) >= 0;
}

double AllocationState::time_of(int agent) const {
  const auto it = time_lookup(info_time_, agent);
  return it != info_time_.end() && it->first == agent ? it->second : -1.0;
}

void AllocationState::set_time(int agent, double t) {
  const auto it = time_lookup(info_time_, agent);
  if (it != info_time_.end() && it->first == agent) {
    info_time_[it - info_time_.begin()].second = t;
  } else {
    info_time_.emplace(it, agent, t);
  }
}

void AllocationState::bid_phase(const Vec3& pos, double now) {
  if (my_task_ >= 0) return;
  double score = 0.0;
  const int j = best_open_task(pos, &score);
  if (j < 0) return;
  drop_agent_entries(agent_id_);
  winners_[j].push_back({agent_id_, score});
  my_task_ = j;
  set_time(agent_id_, now);
  sort_and_trim();
  // The trim can bounce this agent right back out on a full list of ties.
  bool present = false;
  for (const WinnerEntry& e : winners_[j]) present |= (e.agent_id == agent_id_);
  if (!present) my_task_ = -1;
}

void AllocationState::drop_agent_entries(int agent) {
  for (auto& lst : winners_) {
    lst.erase(std::remove_if(lst.begin(), lst.end(),
                             [agent](const WinnerEntry& e) {
                               return e.agent_id == agent;
                             }),
              lst.end());
  }
}

void AllocationState::sort_and_trim() {
  for (size_t j = 0; j < winners_.size(); ++j) {
    std::sort(winners_[j].begin(), winners_[j].end(), entry_before);
    if (static_cast<int>(winners_[j].size()) > tasks_[j].capacity) {
      winners_[j].resize(tasks_[j].capacity);
    }
  }
}

void AllocationState::merge(const AllocationMsg& msg, double now) {
  if (msg.winners.size() != winners_.size())
    throw InvariantError("allocation message task count mismatch");

  // Everyone the message mentions, with the adoption rule applied once:
  // the sender speaks for itself, third parties only with strictly newer
  // information, and my own claim always stands. Both time lists are
  // sorted by agent id, so one lockstep pass covers them.
  std::unordered_set<int> adopted;
  TimeVec fresh;  // first-contact agents, merged into info_time_ below
  size_t mi = 0;
  for (const auto& [a, their_t] : msg.info_time) {
    while (mi < info_time_.size() && info_time_[mi].first < a) ++mi;
    const bool known = mi < info_time_.size() && info_time_[mi].first == a;
    if (a == agent_id_) continue;
    const double my_t = known ? info_time_[mi].second : -1.0;
    if (a == msg.sender || their_t > my_t) {
      adopted.insert(a);
      if (known) {
        info_time_[mi].second = std::max(my_t, their_t);
      } else {
        fresh.emplace_back(a, their_t);
      }
    }
  }
  // Winner entries for agents absent from the time list count as time 0.
  for (const auto& lst : msg.winners) {
    for (const WinnerEntry& e : lst) {
      const int a = e.agent_id;
      if (a == agent_id_ || adopted.count(a)) continue;
      const auto their_it = time_lookup(msg.info_time, a);
      if (their_it != msg.info_time.end() && their_it->first == a)
        continue;  // already judged in the lockstep pass
      const double my_t = time_of(a);
      if (a == msg.sender || 0.0 > my_t) {
        adopted.insert(a);
        if (my_t < 0.0) {
          fresh.emplace_back(a, 0.0);
        } else {
          set_time(a, std::max(my_t, 0.0));
        }
      }
    }
  }
  if (!fresh.empty()) {
    std::sort(fresh.begin(), fresh.end());
    TimeVec merged;
    merged.reserve(info_time_.size() + fresh.size());
    std::merge(info_time_.begin(), info_time_.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged));
    info_time_ = std::move(merged);
  }

  if (!adopted.empty()) {
    for (size_t j = 0; j < winners_.size(); ++j) {
      auto& lst = winners_[j];
      lst.erase(std::remove_if(lst.begin(), lst.end(),
                               [&](const WinnerEntry& e) {
                                 return adopted.count(e.agent_id) > 0;
                               }),
                lst.end());
      for (const WinnerEntry& e : msg.winners[j]) {
        if (adopted.count(e.agent_id)) lst.push_back(e);
      }
    }
  }
  set_time(msg.sender, std::max(time_of(msg.sender), now));
  sort_and_trim();

  if (my_task_ >= 0) {
    bool present = false;
    for (const WinnerEntry& e : winners_[my_task_])
      present |= (e.agent_id == agent_id_);
    if (!present) my_task_ = -1;  // outbid, re-enter bidding
  }
}

void AllocationState::evict_lost(double now, double timeout) {
  for (auto& lst : winners_) {
    lst.erase(std::remove_if(lst.begin(), lst.end(),
                             [&](const WinnerEntry& e) {
                               if (e.agent_id == agent_id_) return false;
                               const double t = std::max(time_of(e.agent_id), 0.0);
                               return now - t > timeout;
                             }),
              lst.end());
  }
}

AllocationMsg AllocationState::snapshot(double now) const {
  AllocationMsg msg;
  msg.sender = agent_id_;
  msg.winners = winners_;
  msg.info_time = info_time_;
  const auto it = time_lookup(msg.info_time, agent_id_);
  if (it != msg.info_time.end() && it->first == agent_id_) {
    msg.info_time[it - msg.info_time.begin()].second = now;
  } else {
    msg.info_time.emplace(it, agent_id_, now);
  }
  return msg;
}

bool allocation_converged(const std::vector<const AllocationState*>& states,
                          const std::vector<Vec3>& positions) {
  if (states.empty()) return true;
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i]->wants_to_bid(positions[i])) return false;
  }
  const auto& ref = states[0]->winners();
  for (size_t i = 1; i < states.size(); ++i) {
    const auto& w = states[i]->winners();
    if (w.size() != ref.size()) return false;
    for (size_t j = 0; j < ref.size(); ++j) {
      if (w[j].size() != ref[j].size()) return false;
      for (size_t k = 0; k < ref[j].size(); ++k) {
        if (w[j][k].agent_id != ref[j][k].agent_id ||
            w[j][k].bid != ref[j][k].bid)
          return false;
      }
    }
  }
  return true;
}

}  // namespace swarmpatrol

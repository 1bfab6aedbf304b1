#include <algorithm>

#include "camp/features.hpp"

namespace camp {

int ClusterAssignments::team_cluster(const TeamId& t) const {
    auto it = teams.find(t);
    if (it == teams.end()) throw ValidationError("team '" + t + "' has no cluster assignment");
    return it->second;
}

int ClusterAssignments::batter_cluster(const PlayerId& p) const noexcept {
    auto it = batters.find(p);
    return it == batters.end() ? batter_slots : it->second;
}

int ClusterAssignments::bowler_cluster(const PlayerId& p) const noexcept {
    auto it = bowlers.find(p);
    return it == bowlers.end() ? bowler_slots : it->second;
}

std::vector<double> StageVector::features() const {
    std::vector<double> f;
    f.reserve(2 + remaining_batters.size() + bowling_capacity.size() + 4);
    f.push_back(batting_team_cluster);
    f.push_back(bowling_team_cluster);
    for (int c : remaining_batters) f.push_back(c);
    for (int c : bowling_capacity) f.push_back(c);
    f.push_back(wickets_lost);
    f.push_back(runs_so_far);
    f.push_back(static_cast<double>(venue));
    f.push_back(remaining_target);
    return f;
}

std::vector<std::string> StageVector::feature_names(int batter_slots, int bowler_slots) {
    std::vector<std::string> n{"bat_team_cluster", "bowl_team_cluster"};
    for (int c = 1; c <= batter_slots; ++c) n.push_back("batters_c" + std::to_string(c));
    for (int c = 1; c <= bowler_slots; ++c) n.push_back("bowl_capacity_c" + std::to_string(c));
    n.insert(n.end(), {"wickets_lost", "runs_so_far", "venue", "remaining_target"});
    return n;
}

StageTracker::StageTracker(const Match& match, int innings, const ClusterAssignments& clusters)
    : match_(&match), clusters_(&clusters) {
    if (innings != 1 && innings != 2) throw ValidationError("StageTracker: innings must be 1 or 2");
    batting_ = &match.batting_lineup(innings);
    bowling_ = &match.bowling_lineup(innings);
    const auto& s = match.summary;
    stage_.innings = innings;
    stage_.boundary = 1;
    stage_.overs_remaining = kOversPerInnings;
    stage_.batting_team_cluster = clusters.team_cluster(s.batting_team(innings));
    stage_.bowling_team_cluster = clusters.team_cluster(s.bowling_team(innings));
    stage_.venue = s.venue_class;
    target_ = innings == 2 ? s.target_runs() : 0;
    stage_.remaining_target = target_;
    recompute_counts();
}

void StageTracker::recompute_counts() {
    stage_.remaining_batters.assign(static_cast<std::size_t>(clusters_->batter_slots), 0);
    for (const auto& p : *batting_) {
        if (std::find(dismissed_.begin(), dismissed_.end(), p) != dismissed_.end()) continue;
        stage_.remaining_batters[static_cast<std::size_t>(clusters_->batter_cluster(p) - 1)] += 1;
    }
    stage_.bowling_capacity.assign(static_cast<std::size_t>(clusters_->bowler_slots), 0);
    for (const auto& p : *bowling_) {
        auto it = overs_bowled_.find(p);
        const int bowled = it == overs_bowled_.end() ? 0 : it->second;
        stage_.bowling_capacity[static_cast<std::size_t>(clusters_->bowler_cluster(p) - 1)] +=
            std::max(0, kMaxOversPerBowler - bowled);
    }
}

void StageTracker::advance(const OverRecord& over) {
    if (over.innings != stage_.innings || over.over_index != stage_.boundary) {
        throw ValidationError("StageTracker: expected innings " + std::to_string(stage_.innings) + " over " +
                              std::to_string(stage_.boundary) + ", got innings " +
                              std::to_string(over.innings) + " over " + std::to_string(over.over_index));
    }
    stage_.runs_so_far += over.runs_total;
    for (const auto& w : over.wickets) dismissed_.push_back(w.player_out);
    stage_.wickets_lost += over.wicket_count();
    overs_bowled_[over.bowler] += 1;
    stage_.boundary += 1;
    stage_.overs_remaining -= 1;
    if (stage_.innings == 2) stage_.remaining_target = target_ - stage_.runs_so_far;
    recompute_counts();
}

std::vector<StageVector> build_stage_vectors(const Match& match, int innings,
                                             const ClusterAssignments& clusters) {
    StageTracker tracker(match, innings, clusters);
    const auto& overs = match.innings_overs(innings);
    std::vector<StageVector> out;
    out.reserve(overs.size() + 1);
    out.push_back(tracker.current());
    for (const auto& o : overs) {
        tracker.advance(o);
        out.push_back(tracker.current());
    }
    return out;
}

StageVector build_stage_vector(const Match& match, int innings, int boundary,
                               const ClusterAssignments& clusters) {
    const auto& overs = match.innings_overs(innings);
    if (boundary < 1 || boundary > static_cast<int>(overs.size()) + 1) {
        throw ValidationError("build_stage_vector: boundary " + std::to_string(boundary) + " outside 1.." +
                              std::to_string(overs.size() + 1) + " for " + match.id() + " innings " +
                              std::to_string(innings));
    }
    StageTracker tracker(match, innings, clusters);
    for (int i = 0; i + 1 < boundary; ++i) tracker.advance(overs[static_cast<std::size_t>(i)]);
    return tracker.current();
}

}  // namespace camp

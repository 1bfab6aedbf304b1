#pragma once

#include <span>
#include <vector>

#include "camp/ingest.hpp"
#include "camp/projection.hpp"

/// Reference implementations written from the definitions, without sharing code
/// with the library.
namespace camp::oracle {

/// Weighted average of A over every example with the same (overs, wickets),
/// weights 1/(d+eps), d the Euclidean distance after per-column z-scoring with
/// population statistics over the whole store.
[[nodiscard]] double brute_knn(std::span<const TrainingExample> store, const std::vector<double>& x,
                               int overs_remaining, int wickets_lost, const MatchId* exclude, double eps);

struct LinearFit {
    double intercept = 0.0;
    std::vector<double> beta;
};

/// Solves the raw-space ridge normal equations with an unpenalized intercept,
///   [n      1'X          ] [b]   [1'y]
///   [X'1    X'X + lam*S^2] [B] = [X'y]
/// by Gaussian elimination with partial pivoting; S holds population stds.
[[nodiscard]] LinearFit normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                         double lambda);

/// sup |F_a - F_b| evaluated at every sample point.
[[nodiscard]] double ks(const std::vector<double>& a, const std::vector<double>& b);

struct TeamCell {
    double runs_sum = 0.0;
    int n = 0;
    int wins = 0;
};

/// Team feature vector by nested loops over (opponent, venue, innings).
[[nodiscard]] std::vector<double> team_vector(const TeamId& team, const std::vector<TeamId>& universe,
                                              std::span<const Match> matches);

}  // namespace camp::oracle

#include "rdchain/covering.hpp"

#include <bit>
#include <cstdint>

#include "rdchain/error.hpp"

namespace rdchain {

namespace {

using Mask = std::uint32_t;

std::vector<Mask> ball_masks(const FiniteMetricSpace& space, double radius) {
  const std::size_t n = space.size();
  std::vector<Mask> balls(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t p = 0; p < n; ++p)
      if (space.dist(c, p) <= radius) balls[c] |= Mask{1} << p;
  return balls;
}

CoveringReport greedy_cover(const FiniteMetricSpace& space, double radius) {
  const std::size_t n = space.size();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  CoveringReport rep{radius, 0, CoverMethod::Greedy, {}};
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (std::size_t p = 0; p < n; ++p)
        if (!covered[p] && space.dist(c, p) <= radius) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (std::size_t p = 0; p < n; ++p)
      if (!covered[p] && space.dist(best, p) <= radius) {
        covered[p] = true;
        --remaining;
      }
    rep.centers.push_back(best);
  }
  rep.count = rep.centers.size();
  return rep;
}

struct CoverSearch {
  std::vector<Mask> balls;
  std::vector<std::vector<std::size_t>> coverers;  // centers whose ball contains point p
  Mask full = 0;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  int max_ball = 1;

  void run(Mask covered) {
    if (covered == full) {
      if (best.empty() || chosen.size() < best.size()) best = chosen;
      return;
    }
    const int uncovered = std::popcount(static_cast<Mask>(full & ~covered));
    const std::size_t lower = chosen.size() + static_cast<std::size_t>((uncovered + max_ball - 1) / max_ball);
    if (!best.empty() && lower >= best.size()) return;
    // Branch on the uncovered point with the fewest coverers.
    std::size_t pick = 0;
    std::size_t fewest = SIZE_MAX;
    for (std::size_t p = 0; p < coverers.size(); ++p) {
      if (covered & (Mask{1} << p)) continue;
      if (coverers[p].size() < fewest) {
        fewest = coverers[p].size();
        pick = p;
      }
    }
    for (const std::size_t c : coverers[pick]) {
      chosen.push_back(c);
      run(covered | balls[c]);
      chosen.pop_back();
    }
  }
};

CoveringReport exact_cover(const FiniteMetricSpace& space, double radius) {
  const std::size_t n = space.size();
  CoverSearch s;
  s.balls = ball_masks(space, radius);
  s.coverers.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    s.max_ball = std::max(s.max_ball, std::popcount(s.balls[c]));
    for (std::size_t p = 0; p < n; ++p)
      if (s.balls[c] & (Mask{1} << p)) s.coverers[p].push_back(c);
  }
  s.full = n == 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
  s.best = greedy_cover(space, radius).centers;
  s.run(0);
  return CoveringReport{radius, s.best.size(), CoverMethod::Exact, s.best};
}

struct CliqueSearch {
  std::vector<Mask> adj;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  void run(Mask candidates) {
    if (candidates == 0) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + static_cast<std::size_t>(std::popcount(candidates)) <= best.size()) return;
    while (candidates != 0) {
      if (current.size() + static_cast<std::size_t>(std::popcount(candidates)) <= best.size()) return;
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      current.push_back(static_cast<std::size_t>(v));
      run(candidates & adj[static_cast<std::size_t>(v)]);
      current.pop_back();
    }
  }
};

}  // namespace

CoveringReport covering_number(const FiniteMetricSpace& space, double radius, CoverMethod method) {
  if (!(radius >= 0.0)) fail(ErrorKind::InvalidArgument, "radius must be nonnegative");
  if (method == CoverMethod::Exact) {
    if (space.size() > kExactSearchLimit)
      fail(ErrorKind::SizeLimit, "exact covering is limited to " + std::to_string(kExactSearchLimit) + " points");
    return exact_cover(space, radius);
  }
  return greedy_cover(space, radius);
}

CoveringReport covering_number(const FiniteMetricSpace& space, double radius) {
  return covering_number(space, radius, space.size() <= kExactSearchLimit ? CoverMethod::Exact : CoverMethod::Greedy);
}

PackingReport greedy_packing(const FiniteMetricSpace& space, double radius) {
  PackingReport rep{radius, 0, false, {}};
  for (std::size_t p = 0; p < space.size(); ++p) {
    bool ok = true;
    for (const std::size_t m : rep.members)
      if (space.dist(p, m) < radius) {
        ok = false;
        break;
      }
    if (ok) rep.members.push_back(p);
  }
  rep.count = rep.members.size();
  return rep;
}

PackingReport packing_number(const FiniteMetricSpace& space, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "radius must be positive");
  const std::size_t n = space.size();
  if (n > kExactSearchLimit) return greedy_packing(space, radius);
  CliqueSearch s;
  s.adj.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && space.dist(i, j) >= radius) s.adj[i] |= Mask{1} << j;
  s.best = greedy_packing(space, radius).members;
  s.run(n == 32 ? ~Mask{0} : ((Mask{1} << n) - 1));
  return PackingReport{radius, s.best.size(), true, s.best};
}

}  // namespace rdchain

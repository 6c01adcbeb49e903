#include "rdchain/assignment.hpp"

#include <limits>
#include <numeric>
#include <queue>

#include "rdchain/error.hpp"

namespace rdchain {

namespace {

struct Move {
  double cost;  // change in total cost when the row leaves `from` for `to`
  std::size_t row;
  bool operator>(const Move& o) const { return cost > o.cost || (cost == o.cost && row > o.row); }
};

using MoveHeap = std::priority_queue<Move, std::vector<Move>, std::greater<Move>>;

}  // namespace

double max_value_class_assignment(const Eigen::MatrixXd& value, const std::vector<std::size_t>& capacity,
                                  std::vector<std::size_t>* assignment) {
  const auto n = static_cast<std::size_t>(value.rows());
  const auto k = static_cast<std::size_t>(value.cols());
  if (capacity.size() != k) fail(ErrorKind::InvalidArgument, "capacity count does not match the columns");
  if (std::accumulate(capacity.begin(), capacity.end(), std::size_t{0}) != n)
    fail(ErrorKind::InvalidArgument, "capacities must sum to the row count");
  if (!value.allFinite()) fail(ErrorKind::InvalidArgument, "non-finite assignment value");

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  auto cost = [&](std::size_t i, std::size_t c) { return -value(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)); };

  std::vector<std::size_t> owner(n, kNone);
  std::vector<std::size_t> load(k, 0);
  std::vector<MoveHeap> heaps(k * k);
  auto enter = [&](std::size_t row, std::size_t cls) {
    owner[row] = cls;
    for (std::size_t b = 0; b < k; ++b)
      if (b != cls) heaps[cls * k + b].push({cost(row, b) - cost(row, cls), row});
  };
  auto best_move = [&](std::size_t a, std::size_t b) -> const Move* {
    MoveHeap& h = heaps[a * k + b];
    while (!h.empty() && owner[h.top().row] != a) h.pop();
    return h.empty() ? nullptr : &h.top();
  };

  std::vector<double> dist(k);
  std::vector<std::size_t> pred(k);
  std::vector<std::size_t> pred_row(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      dist[c] = cost(i, c);
      pred[c] = kNone;
      pred_row[c] = kNone;
    }
    // Bellman-Ford over the class graph; the current assignment is optimal for
    // rows 0..i-1, so there are no negative cycles.
    for (std::size_t pass = 0; pass + 1 < k; ++pass) {
      bool changed = false;
      for (std::size_t a = 0; a < k; ++a) {
        if (load[a] == 0) continue;
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b) continue;
          const Move* mv = best_move(a, b);
          if (!mv) continue;
          const double cand = dist[a] + mv->cost;
          if (cand < dist[b] - 1e-12 * (1.0 + std::abs(dist[b]))) {
            dist[b] = cand;
            pred[b] = a;
            pred_row[b] = mv->row;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t target = kNone;
    for (std::size_t c = 0; c < k; ++c)
      if (load[c] < capacity[c] && (target == kNone || dist[c] < dist[target])) target = c;
    if (target == kNone) fail(ErrorKind::InvalidArgument, "no spare capacity");

    ++load[target];
    std::size_t b = target;
    std::size_t guard = 0;
    while (pred[b] != kNone) {
      const std::size_t a = pred[b];
      const std::size_t row = pred_row[b];
      enter(row, b);  // leaves class a
      b = a;
      if (++guard > k) fail(ErrorKind::InvalidArgument, "cycle in augmenting path");
    }
    enter(i, b);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += value(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(owner[i]));
  if (assignment) *assignment = owner;
  return total;
}

}  // namespace rdchain

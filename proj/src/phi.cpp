#include "kc/phi.hpp"

#include <algorithm>

#include "kc/errors.hpp"

namespace kc {
namespace {

// True when b should be removed from a -> b -> c, i.e. slope(a,b) >= slope(b,c).
bool not_convex(const FrontierPoint& a, const FrontierPoint& b, const FrontierPoint& c) {
  return (b.mu - a.mu) * (c.w - b.w) >= (c.mu - b.mu) * (b.w - a.w);
}

struct Segment {
  std::size_t item;
  std::size_t index;  // segment from points[index] to points[index + 1]
  Rational dw;
  Rational dmu;
};

// Lower envelope of the frontier at w, with the two bracketing points.
struct Projection {
  std::size_t lower = 0;
  Rational fraction;  // weight on points[lower + 1]
};

Projection project(const ParetoFrontier& f, const Rational& w) {
  const auto& p = f.points;
  if (w.sign() <= 0 || p.size() == 1) return Projection{0, Rational(0)};
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (w <= p[k + 1].w) return Projection{k, (w - p[k].w) / (p[k + 1].w - p[k].w)};
  }
  return Projection{p.size() - 2, Rational(1)};
}

void validate(const MskcInstance& inst, const Rational& t, const std::vector<std::vector<Rational>>& x) {
  if (x.size() != inst.size()) throw InfeasibleInput("assignment has wrong number of items");
  Rational used(0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const MskcItem& item = inst.item(i);
    if (x[i].size() != item.choice_count()) throw InfeasibleInput("assignment row " + std::to_string(i) + " has wrong length");
    Rational total(0);
    for (std::size_t j = 0; j < item.choice_count(); ++j) {
      if (x[i][j].sign() < 0) throw InfeasibleInput("negative assignment");
      total += x[i][j];
      used += x[i][j] * choice_truncated_mean(item, j, t);
    }
    if (total != Rational(1)) throw InfeasibleInput("row " + std::to_string(i) + " does not sum to one");
  }
  if (used > t) throw InfeasibleInput("assignment exceeds capacity");
}

}  // namespace

ParetoFrontier frontier_from_points(std::vector<FrontierPoint> candidates) {
  // Anything with w <= 0 is single-dominated by the null choice.
  std::erase_if(candidates, [](const FrontierPoint& p) { return p.w.sign() <= 0; });
  std::sort(candidates.begin(), candidates.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.mu != b.mu) return a.mu < b.mu;
    return a.choice < b.choice;
  });
  // Single dominance: keep a point only if every larger-w point has larger mu.
  std::vector<FrontierPoint> kept;
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (!kept.empty() && it->w == kept.back().w) {
      kept.back() = *it;  // same w: lower mu, then lower choice index
    } else if (kept.empty() || it->mu < kept.back().mu) {
      kept.push_back(*it);
    }
  }
  std::reverse(kept.begin(), kept.end());

  ParetoFrontier f;
  f.points.push_back(FrontierPoint{kNullChoice, Rational(0), Rational(0)});
  for (FrontierPoint& p : kept) {
    // Double dominance (and collinear middles) via the lower convex hull.
    while (f.points.size() >= 2 && not_convex(f.points[f.points.size() - 2], f.points.back(), p)) {
      f.points.pop_back();
    }
    f.points.push_back(std::move(p));
  }
  return f;
}

ParetoFrontier eliminate_dominated(const MskcItem& item, const Rational& t) {
  std::vector<FrontierPoint> pts;
  for (std::size_t j = 1; j < item.choice_count(); ++j) {
    pts.push_back(FrontierPoint{j, choice_weight(item, j, t), choice_truncated_mean(item, j, t)});
  }
  return frontier_from_points(std::move(pts));
}

Rational PhiSolution::used_capacity(const MskcInstance& inst) const {
  Rational used(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (!x[i][j].is_zero()) used += x[i][j] * choice_truncated_mean(inst.item(i), j, budget);
    }
  }
  return used;
}

PhiSolution solve_phi(const MskcInstance& inst, const Rational& t) {
  if (t.sign() <= 0) throw ParameterOutOfRange("Phi(t) requires t > 0");
  std::vector<ParetoFrontier> frontiers;
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    frontiers.push_back(eliminate_dominated(inst.item(i), t));
    const auto& p = frontiers.back().points;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      segments.push_back(Segment{i, k, p[k + 1].w - p[k].w, p[k + 1].mu - p[k].mu});
    }
  }
  // Increasing slope dmu/dw; within an item slopes already increase, so a
  // stable order by (slope, item) takes every item's segments as a prefix.
  std::stable_sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    const Rational lhs = a.dmu * b.dw;
    const Rational rhs = b.dmu * a.dw;
    if (lhs != rhs) return lhs < rhs;
    return a.item < b.item;
  });

  std::vector<std::size_t> position(inst.size(), 0);  // frontier index reached per item
  std::optional<std::pair<std::size_t, Rational>> partial;
  Rational room = t;
  for (const Segment& s : segments) {
    if (s.dmu <= room) {
      room -= s.dmu;
      position[s.item] = s.index + 1;
      continue;
    }
    if (room.sign() > 0) partial = std::make_pair(s.item, room / s.dmu);
    break;
  }

  PhiSolution sol;
  sol.budget = t;
  sol.value = Rational(0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    std::vector<Rational> row(inst.item(i).choice_count());
    const auto& p = frontiers[i].points;
    const FrontierPoint& at = p[position[i]];
    if (partial && partial->first == i) {
      const FrontierPoint& next = p[position[i] + 1];
      const Rational& f = partial->second;
      row[at.choice] = Rational(1) - f;
      row[next.choice] = f;
      sol.value += (Rational(1) - f) * at.w + f * next.w;
      sol.fractional = FractionalItem{i, at.choice, next.choice, Rational(1) - f, f};
    } else {
      row[at.choice] = Rational(1);
      sol.value += at.w;
    }
    sol.x.push_back(std::move(row));
  }
  return sol;
}

PhiSolution structure_solution(const MskcInstance& inst, const Rational& t,
                               const std::vector<std::vector<Rational>>& x) {
  validate(inst, t, x);
  // Per item: a frontier segment (lower index) and a position on it.
  struct Placement {
    ParetoFrontier frontier;
    std::size_t lower = 0;
    Rational fraction;
  };
  std::vector<Placement> place;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const MskcItem& item = inst.item(i);
    Placement pl{eliminate_dominated(item, t), 0, Rational(0)};
    // Items already sitting on frontier vertices keep their exact mix.
    Rational w(0);
    for (std::size_t j = 0; j < item.choice_count(); ++j) {
      if (!x[i][j].is_zero()) w += x[i][j] * choice_weight(item, j, t);
    }
    // Vertical projection: same w, lowest mu on the frontier.
    const Projection proj = project(pl.frontier, w);
    pl.lower = proj.lower;
    pl.fraction = proj.fraction;
    if (pl.fraction == Rational(1)) {
      ++pl.lower;
      pl.fraction = Rational(0);
    }
    place.push_back(std::move(pl));
  }

  auto fractional_items = [&]() {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < place.size(); ++i) {
      if (!place[i].fraction.is_zero()) out.push_back(i);
    }
    return out;
  };
  auto seg = [&](std::size_t i) {
    const auto& p = place[i].frontier.points;
    return std::make_pair(p[place[i].lower + 1].w - p[place[i].lower].w, p[place[i].lower + 1].mu - p[place[i].lower].mu);
  };

  // Free moves: a fractional item on a zero-mu segment goes to its upper end.
  for (std::size_t i : fractional_items()) {
    if (seg(i).second.is_zero()) {
      ++place[i].lower;
      place[i].fraction = Rational(0);
    }
  }
  // Shift capacity from the steeper segment to the flatter one until at most
  // one item is fractional. Each round makes at least one item integral.
  for (std::vector<std::size_t> frac = fractional_items(); frac.size() >= 2; frac = fractional_items()) {
    std::size_t a = frac[0];
    std::size_t b = frac[1];
    auto [dwa, dmua] = seg(a);
    auto [dwb, dmub] = seg(b);
    if (dmua * dwb > dmub * dwa) {  // a steeper than b: swap so a is the flatter
      std::swap(a, b);
      std::swap(dwa, dwb);
      std::swap(dmua, dmub);
    }
    const Rational grow = (Rational(1) - place[a].fraction) * dmua;
    const Rational shrink = place[b].fraction * dmub;
    const Rational moved = min(grow, shrink);
    place[a].fraction += moved / dmua;
    place[b].fraction -= moved / dmub;
    for (std::size_t i : {a, b}) {
      if (place[i].fraction == Rational(1)) {
        ++place[i].lower;
        place[i].fraction = Rational(0);
      }
    }
  }

  PhiSolution sol;
  sol.budget = t;
  sol.value = Rational(0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    std::vector<Rational> row(inst.item(i).choice_count());
    const auto& p = place[i].frontier.points;
    const FrontierPoint& at = p[place[i].lower];
    if (place[i].fraction.is_zero()) {
      row[at.choice] = Rational(1);
      sol.value += at.w;
    } else {
      const FrontierPoint& next = p[place[i].lower + 1];
      const Rational& f = place[i].fraction;
      row[at.choice] = Rational(1) - f;
      row[next.choice] = f;
      sol.value += (Rational(1) - f) * at.w + f * next.w;
      sol.fractional = FractionalItem{i, at.choice, next.choice, Rational(1) - f, f};
    }
    sol.x.push_back(std::move(row));
  }
  return sol;
}

LpProblem phi_lp(const MskcInstance& inst, const Rational& t) {
  LpProblem lp;
  lp.sense = LpSense::Maximize;
  std::vector<Rational> mu_row;
  for (const MskcItem& item : inst.items()) {
    for (std::size_t j = 0; j < item.choice_count(); ++j) {
      lp.objective.push_back(choice_weight(item, j, t));
      mu_row.push_back(choice_truncated_mean(item, j, t));
    }
  }
  lp.add(mu_row, LpRelation::LessEqual, t);
  std::size_t offset = 0;
  for (const MskcItem& item : inst.items()) {
    std::vector<Rational> row(lp.variable_count());
    for (std::size_t j = 0; j < item.choice_count(); ++j) row[offset + j] = Rational(1);
    lp.add(std::move(row), LpRelation::Equal, Rational(1));
    offset += item.choice_count();
  }
  return lp;
}

Rational phi_by_simplex(const MskcInstance& inst, const Rational& t) {
  const LpSolution sol = solve_lp_exact(phi_lp(inst, t));
  if (sol.status != LpStatus::Optimal) throw Error("Phi LP did not solve");
  return sol.value;
}

Rational phi_objective(const MskcInstance& inst, const Rational& t, const std::vector<std::vector<Rational>>& x) {
  Rational v(0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (!x[i][j].is_zero()) v += x[i][j] * choice_weight(inst.item(i), j, t);
    }
  }
  return v;
}

bool phi_structure_holds(const MskcInstance& inst, const PhiSolution& sol) {
  try {
    validate(inst, sol.budget, sol.x);
  } catch (const InfeasibleInput&) {
    return false;
  }
  std::size_t split_items = 0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    std::size_t positive = 0;
    for (const Rational& v : sol.x[i]) {
      if (v.sign() > 0) ++positive;
    }
    if (positive > 2) return false;
    if (positive == 2) {
      ++split_items;
      if (!sol.fractional || sol.fractional->item != i) return false;
    }
  }
  if (split_items == 0 && sol.fractional) return false;
  return split_items <= 1 && phi_objective(inst, sol.budget, sol.x) == sol.value;
}

}  // namespace kc

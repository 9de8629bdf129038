#include "facloc/domain.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace facloc {

AlternativeSpace::AlternativeSpace(std::vector<Rational> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("alternative space is empty");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i - 1] < points_[i]))
      throw std::invalid_argument("alternatives must be strictly increasing");
}

int AlternativeSpace::index_of(const Rational& value) const {
  for (int i = 0; i < size(); ++i)
    if (points_[i] == value) return i;
  return -1;
}

std::string AlternativeSpace::describe(ExtElem e) const {
  if (e.is_single()) return points_[e.index()].str();
  return "(" + points_[e.left()].str() + "," + points_[e.right()].str() + ")";
}

void validate_profile(const AlternativeSpace& space, const AgentPartition& agents,
                      const Profile& profile) {
  if (static_cast<int>(profile.peaks.size()) != agents.peaked ||
      static_cast<int>(profile.dips.size()) != agents.dipped)
    throw std::invalid_argument("profile dimensions do not match the agent partition");
  for (int p : profile.peaks)
    if (p < 0 || p >= space.size())
      throw std::invalid_argument("peak outside the alternative space");
  for (int d : profile.dips)
    if (d < 0 || d >= space.size())
      throw std::invalid_argument("dip outside the alternative space");
}

Ranking make_ranking(PrefType type, std::vector<int> order) {
  Ranking r;
  r.type = type;
  r.order = std::move(order);
  r.pos.assign(r.order.size(), -1);
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    int alt = r.order[i];
    if (alt < 0 || alt >= static_cast<int>(r.order.size()))
      throw std::invalid_argument("ranking order is not a permutation");
    r.pos[alt] = static_cast<int>(i);
  }
  for (int p : r.pos)
    if (p < 0) throw std::invalid_argument("ranking order is not a permutation");
  return r;
}

std::vector<ExtElem> extended_order_elements(const AlternativeSpace& space) {
  std::vector<ExtElem> out;
  out.reserve(2 * space.size() - 1);
  for (int k = 0; k <= 2 * (space.size() - 1); ++k) out.push_back(ExtElem::from_key(k));
  return out;
}

Side pair_preference(PrefType type, int location, ExtElem pair) {
  if (type == PrefType::Peaked)
    return location <= pair.left() ? Side::Left : Side::Right;
  return location >= pair.right() ? Side::Left : Side::Right;
}

std::vector<Ranking> enumerate_rankings(const AlternativeSpace& space, PrefType type) {
  // Build each ranking from the least preferred end: at every step the worst
  // remaining alternative is one of the two extremes of the remaining
  // interval, so m-1 binary choices enumerate all 2^(m-1) admissible orders.
  const int m = space.size();
  const std::uint32_t count = 1u << (m - 1);
  std::vector<Ranking> out;
  out.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    std::vector<int> worst_first;
    worst_first.reserve(m);
    int lo = 0, hi = m - 1;
    for (int j = 0; j < m - 1; ++j) {
      if ((bits >> j) & 1u)
        worst_first.push_back(hi--);
      else
        worst_first.push_back(lo++);
    }
    worst_first.push_back(lo);  // the peak of the reversed order
    if (type == PrefType::Peaked) {
      std::vector<int> order(worst_first.rbegin(), worst_first.rend());
      out.push_back(make_ranking(type, std::move(order)));
    } else {
      // A dipped ranking is the reversal of a peaked one: worst-first of the
      // peaked order is exactly best-first of the dipped order.
      out.push_back(make_ranking(type, std::move(worst_first)));
    }
  }
  return out;
}

int restricted_extremum(const Ranking& ranking) { return ranking.extremum(); }

}  // namespace facloc

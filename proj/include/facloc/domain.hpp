#pragma once

#include <string>
#include <vector>

#include "facloc/rational.hpp"

namespace facloc {

/// Side of a contiguous pair (x, y): Left means x, Right means y.
enum class Side { Left, Right };

/// Preference shape of an agent: single-peaked or single-dipped.
enum class PrefType { Peaked, Dipped };

/// Element of the extended order over alternatives and contiguous pairs.
///
/// For a space with points p_0 < ... < p_{m-1}, singles get key 2*i and the
/// pair (p_i, p_{i+1}) gets key 2*i + 1, so plain integer order on keys is
/// the interleaved order  p_0 < (p_0,p_1) < p_1 < (p_1,p_2) < ... < p_{m-1}.
class ExtElem {
 public:
  static ExtElem single(int i) { return ExtElem(2 * i); }
  static ExtElem pair(int left_index) { return ExtElem(2 * left_index + 1); }
  static ExtElem from_key(int key) { return ExtElem(key); }

  bool is_single() const { return (key_ & 1) == 0; }
  bool is_pair() const { return (key_ & 1) != 0; }

  /// Index of the single, or of the pair's left endpoint.
  int index() const { return key_ >> 1; }
  /// Left endpoint index (pairs only; same as index()).
  int left() const { return key_ >> 1; }
  /// Right endpoint index (pairs only).
  int right() const { return (key_ >> 1) + 1; }

  int key() const { return key_; }

  friend auto operator<=>(const ExtElem&, const ExtElem&) = default;

 private:
  explicit ExtElem(int key) : key_(key) {}
  int key_ = 0;
};

/// Finite, strictly increasing set of rational alternatives.
class AlternativeSpace {
 public:
  /// Throws std::invalid_argument unless points is nonempty and strictly
  /// increasing.
  explicit AlternativeSpace(std::vector<Rational> points);

  int size() const { return static_cast<int>(points_.size()); }
  bool has_pairs() const { return size() > 1; }
  const Rational& point(int i) const { return points_[i]; }
  const std::vector<Rational>& points() const { return points_; }

  /// Index of an exact coordinate, or -1 when absent.
  int index_of(const Rational& value) const;

  ExtElem min_single() const { return ExtElem::single(0); }
  ExtElem max_single() const { return ExtElem::single(size() - 1); }
  /// Pair containing the smallest alternative. Requires size() >= 2.
  ExtElem min_pair() const { return ExtElem::pair(0); }
  /// Pair containing the largest alternative. Requires size() >= 2.
  ExtElem max_pair() const { return ExtElem::pair(size() - 2); }

  bool valid_elem(ExtElem e) const {
    return e.key() >= 0 && e.key() <= 2 * (size() - 1);
  }

  /// "2" for singles, "(3,4)" for pairs.
  std::string describe(ExtElem e) const;

  friend bool operator==(const AlternativeSpace&, const AlternativeSpace&) = default;

 private:
  std::vector<Rational> points_;
};

/// Society sizes. Agents are indexed 0..total()-1 with the peaked block
/// first: peaked agents are 0..peaked-1, dipped agents peaked..total()-1.
struct AgentPartition {
  int peaked = 0;
  int dipped = 0;
  int total() const { return peaked + dipped; }
  friend bool operator==(const AgentPartition&, const AgentPartition&) = default;
};

/// Reported peak/dip locations as indices into the alternative space.
struct Profile {
  std::vector<int> peaks;
  std::vector<int> dips;
  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Throws std::invalid_argument when sizes or entries do not fit the space
/// and partition.
void validate_profile(const AlternativeSpace& space, const AgentPartition& agents,
                      const Profile& profile);

/// Strict linear order over all alternatives, most preferred first.
///
/// A Peaked ranking falls off monotonically on each side of its first
/// element; a Dipped ranking is the reverse of some Peaked one (its last
/// element is the dip).
struct Ranking {
  PrefType type = PrefType::Peaked;
  std::vector<int> order;  // alternative indices, most preferred first
  std::vector<int> pos;    // pos[alt] = position of alt within order

  /// Peak for Peaked rankings, dip for Dipped ones.
  int extremum() const {
    return type == PrefType::Peaked ? order.front() : order.back();
  }
  bool prefers(int x, int y) const { return pos[x] < pos[y]; }
};

Ranking make_ranking(PrefType type, std::vector<int> order);

/// All 2m-1 extended-order elements, ascending.
std::vector<ExtElem> extended_order_elements(const AlternativeSpace& space);

/// Which endpoint of a contiguous pair an agent prefers, given only the
/// location of their peak or dip. Peaked agents take the left endpoint
/// exactly when the peak is at or left of it; dipped agents take it exactly
/// when the dip is at or right of the right endpoint. Total: every agent
/// ends up on one side.
Side pair_preference(PrefType type, int location, ExtElem pair);

/// Every admissible ranking for the type, in a fixed deterministic order.
/// There are exactly 2^(m-1) of them.
std::vector<Ranking> enumerate_rankings(const AlternativeSpace& space, PrefType type);

/// Peak (first element) or dip (last element) of a ranking.
int restricted_extremum(const Ranking& ranking);

}  // namespace facloc

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causetlab/poset.hpp"

namespace causetlab {

enum class ModelKind { ladder, two_chains, grid, disjoint_chains, dary_tree, custom };

// A countable partial order presented in a fixed enumeration x_0, x_1, ...
// that is a natural extension: every element's down-set lies entirely at
// smaller indices.  Generators are immutable descriptions; queries are pure.
//
// Built-in families:
//   ladder            x_i < x_j  iff  j > i+1       (two minimal choices at
//                                                    every growth step)
//   two_chains        two disjoint infinite chains, interleaved
//   grid              N x N with the product order, antidiagonal sweep
//   disjoint_chains   m disjoint chains of length t (finite, n = m*t)
//   dary_tree         complete rooted d-ary tree, level order
//   custom            any finite poset whose stated order is a natural
//                     extension (identity is a linear extension)
class CausalSetGenerator {
 public:
  static CausalSetGenerator ladder();
  static CausalSetGenerator two_chains();
  static CausalSetGenerator grid();
  static CausalSetGenerator disjoint_chains(int m, int t);
  static CausalSetGenerator dary_tree(int d);
  static CausalSetGenerator custom(FinitePoset p);

  ModelKind kind() const { return kind_; }
  std::string name() const;
  std::optional<int> size() const;  // nullopt when infinite

  bool less(int i, int j) const;
  std::vector<int> covers_down(int i) const;  // lower covers
  std::vector<int> covers_up(int i) const;    // upper covers
  std::vector<int> initial_minimals() const;  // elements with no lower cover
  std::vector<int> down_set(int i) const;     // full strict down-set (sorted)

  // Deterministic distinct label in [0,1] for element i (splittable hash of
  // the element index, salted by the model identity).
  double label(int i) const;

  // Induced order on elements 0..n-1 with labels attached.
  FinitePoset prefix(int n) const;

  // True when the sequence lists distinct elements such that each element's
  // full down-set appears earlier in the sequence.
  bool is_ordered_stem(const std::vector<int>& elements) const;

  // Inverse of label() over indices [0,horizon); nullopt when absent.
  std::optional<int> element_by_label(double label, int horizon = 65536) const;

  int param_m() const { return m_; }
  int param_t() const { return t_; }
  int param_d() const { return d_; }

 private:
  CausalSetGenerator() = default;
  void check_index(int i) const;

  ModelKind kind_ = ModelKind::ladder;
  int m_ = 0, t_ = 0, d_ = 0;
  FinitePoset custom_;
  std::uint64_t salt_ = 0;
};

// "ladder" | "two-chains" | "grid" | "chains:m,t" | "dary:d" | "file:<path>"
CausalSetGenerator parse_model_string(const std::string& spec);

}  // namespace causetlab

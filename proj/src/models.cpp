#include "causetlab/models.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "causetlab/rng.hpp"

namespace causetlab {

namespace {

std::uint64_t model_salt(ModelKind kind, int m, int t, int d) {
  std::uint64_t s = 0x5AB3C0DE00000000ull + static_cast<std::uint64_t>(kind);
  s = mix64(s + static_cast<std::uint64_t>(m) * 3 + static_cast<std::uint64_t>(t) * 5 +
            static_cast<std::uint64_t>(d) * 7);
  return s;
}

// grid antidiagonal s >= 2 holds cells (a, s-a) for a = 1..s-1; cells are
// enumerated diagonal by diagonal, ascending in a.
std::pair<int, int> grid_cell(int index) {
  int s = 2;
  long long base = 0;
  while (base + (s - 1) <= index) {
    base += s - 1;
    ++s;
  }
  const int a = static_cast<int>(index - base) + 1;
  return {a, s - a};
}

}  // namespace

CausalSetGenerator CausalSetGenerator::ladder() {
  CausalSetGenerator g;
  g.kind_ = ModelKind::ladder;
  g.salt_ = model_salt(g.kind_, 0, 0, 0);
  return g;
}

CausalSetGenerator CausalSetGenerator::two_chains() {
  CausalSetGenerator g;
  g.kind_ = ModelKind::two_chains;
  g.m_ = 2;
  g.salt_ = model_salt(g.kind_, 2, 0, 0);
  return g;
}

CausalSetGenerator CausalSetGenerator::grid() {
  CausalSetGenerator g;
  g.kind_ = ModelKind::grid;
  g.salt_ = model_salt(g.kind_, 0, 0, 0);
  return g;
}

CausalSetGenerator CausalSetGenerator::disjoint_chains(int m, int t) {
  if (m < 1 || t < 1) throw std::invalid_argument("disjoint_chains: need m >= 1 and t >= 1");
  CausalSetGenerator g;
  g.kind_ = ModelKind::disjoint_chains;
  g.m_ = m;
  g.t_ = t;
  g.salt_ = model_salt(g.kind_, m, t, 0);
  return g;
}

CausalSetGenerator CausalSetGenerator::dary_tree(int d) {
  if (d < 1) throw std::invalid_argument("dary_tree: need d >= 1");
  CausalSetGenerator g;
  g.kind_ = ModelKind::dary_tree;
  g.d_ = d;
  g.salt_ = model_salt(g.kind_, 0, 0, d);
  return g;
}

CausalSetGenerator CausalSetGenerator::custom(FinitePoset p) {
  if (!p.is_standard_suborder()) {
    throw std::invalid_argument(
        "custom model: element enumeration must be a natural extension "
        "(every down-set at earlier indices)");
  }
  CausalSetGenerator g;
  g.kind_ = ModelKind::custom;
  g.custom_ = std::move(p);
  g.salt_ = model_salt(g.kind_, g.custom_.n, 0, 0);
  return g;
}

std::string CausalSetGenerator::name() const {
  switch (kind_) {
    case ModelKind::ladder: return "ladder";
    case ModelKind::two_chains: return "two-chains";
    case ModelKind::grid: return "grid";
    case ModelKind::disjoint_chains:
      return "chains:" + std::to_string(m_) + "," + std::to_string(t_);
    case ModelKind::dary_tree: return "dary:" + std::to_string(d_);
    case ModelKind::custom: return "custom:" + std::to_string(custom_.n);
  }
  return "?";
}

std::optional<int> CausalSetGenerator::size() const {
  if (kind_ == ModelKind::disjoint_chains) return m_ * t_;
  if (kind_ == ModelKind::custom) return custom_.n;
  return std::nullopt;
}

void CausalSetGenerator::check_index(int i) const {
  if (i < 0) throw std::invalid_argument("model element index must be non-negative");
  if (auto n = size(); n && i >= *n) {
    throw std::invalid_argument("model element index " + std::to_string(i) +
                                " outside finite model of size " + std::to_string(*n));
  }
}

bool CausalSetGenerator::less(int i, int j) const {
  check_index(i);
  check_index(j);
  if (i == j) return false;
  switch (kind_) {
    case ModelKind::ladder:
      return j > i + 1;
    case ModelKind::two_chains:
      return (i % 2 == j % 2) && i < j;
    case ModelKind::grid: {
      auto [a, b] = grid_cell(i);
      auto [c, d] = grid_cell(j);
      return a <= c && b <= d && !(a == c && b == d);
    }
    case ModelKind::disjoint_chains:
      return (i % m_ == j % m_) && i < j;
    case ModelKind::dary_tree: {
      if (i >= j) return false;
      int v = j;
      while (v > 0) {
        v = (v - 1) / d_;
        if (v == i) return true;
      }
      return false;
    }
    case ModelKind::custom:
      return custom_.less(i, j);
  }
  return false;
}

std::vector<int> CausalSetGenerator::covers_down(int i) const {
  check_index(i);
  std::vector<int> out;
  switch (kind_) {
    case ModelKind::ladder:
      if (i - 2 >= 0) out.push_back(i - 2);
      if (i - 3 >= 0) out.push_back(i - 3);
      break;
    case ModelKind::two_chains:
      if (i - 2 >= 0) out.push_back(i - 2);
      break;
    case ModelKind::grid: {
      auto [a, b] = grid_cell(i);
      if (a > 1) {
        const auto s = a - 1 + b;
        out.push_back(static_cast<int>((s - 1) * (s - 2) / 2 + (a - 2)));
      }
      if (b > 1) {
        const auto s = a + b - 1;
        out.push_back(static_cast<int>((s - 1) * (s - 2) / 2 + (a - 1)));
      }
      break;
    }
    case ModelKind::disjoint_chains:
      if (i - m_ >= 0) out.push_back(i - m_);
      break;
    case ModelKind::dary_tree:
      if (i > 0) out.push_back((i - 1) / d_);
      break;
    case ModelKind::custom: {
      for (int j = 0; j < custom_.n; ++j) {
        if (custom_.less(j, i) && (custom_.above[j] & custom_.below[i]) == 0) out.push_back(j);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> CausalSetGenerator::covers_up(int i) const {
  check_index(i);
  std::vector<int> out;
  switch (kind_) {
    case ModelKind::ladder:
      out = {i + 2, i + 3};
      break;
    case ModelKind::two_chains:
      out = {i + 2};
      break;
    case ModelKind::grid: {
      auto [a, b] = grid_cell(i);
      const auto s1 = a + 1 + b;
      out.push_back(static_cast<int>((s1 - 1) * (s1 - 2) / 2 + a));
      const auto s2 = a + b + 1;
      out.push_back(static_cast<int>((s2 - 1) * (s2 - 2) / 2 + (a - 1)));
      break;
    }
    case ModelKind::disjoint_chains:
      if ((i / m_) + 1 < t_) out.push_back(i + m_);
      break;
    case ModelKind::dary_tree:
      for (int c = 1; c <= d_; ++c) out.push_back(d_ * i + c);
      break;
    case ModelKind::custom: {
      for (int j = 0; j < custom_.n; ++j) {
        if (custom_.less(i, j) && (custom_.above[i] & custom_.below[j]) == 0) out.push_back(j);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> CausalSetGenerator::initial_minimals() const {
  switch (kind_) {
    case ModelKind::ladder: return {0, 1};
    case ModelKind::two_chains: return {0, 1};
    case ModelKind::grid: return {0};
    case ModelKind::disjoint_chains: {
      std::vector<int> out(m_);
      for (int i = 0; i < m_; ++i) out[i] = i;
      return out;
    }
    case ModelKind::dary_tree: return {0};
    case ModelKind::custom: return custom_.minimal_elements(0);
  }
  return {};
}

std::vector<int> CausalSetGenerator::down_set(int i) const {
  check_index(i);
  if (kind_ == ModelKind::custom) {
    std::vector<int> out;
    for (int j = 0; j < custom_.n; ++j)
      if (custom_.less(j, i)) out.push_back(j);
    return out;
  }
  // every model enumeration is a natural extension, so D(x_i) ⊆ {x_0..x_{i-1}}
  std::vector<int> out;
  for (int j = 0; j < i; ++j)
    if (less(j, i)) out.push_back(j);
  return out;
}

double CausalSetGenerator::label(int i) const {
  check_index(i);
  if (kind_ == ModelKind::custom && custom_.has_labels()) return custom_.labels[i];
  const std::uint64_t h = mix64(salt_ ^ ((static_cast<std::uint64_t>(i) + 1) * 0x9E3779B97F4A7C15ull));
  return (h >> 11) * 0x1.0p-53;
}

FinitePoset CausalSetGenerator::prefix(int n) const {
  if (n < 0 || n > max_poset_n()) {
    throw std::invalid_argument("prefix size " + std::to_string(n) + " outside [0," +
                                std::to_string(max_poset_n()) + "]");
  }
  if (auto sz = size(); sz && n > *sz) {
    throw std::invalid_argument("prefix size exceeds finite model size");
  }
  FinitePoset p;
  p.n = n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (less(i, j)) {
        p.below[j] |= Mask(1) << i;
        p.above[i] |= Mask(1) << j;
      }
    }
  }
  p.labels.resize(n);
  for (int i = 0; i < n; ++i) p.labels[i] = label(i);
  std::vector<double> sorted = p.labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::logic_error("model label hash collision; change the model salt");
  }
  return p;
}

bool CausalSetGenerator::is_ordered_stem(const std::vector<int>& elements) const {
  std::vector<int> seen;
  for (int e : elements) {
    check_index(e);
    if (std::find(seen.begin(), seen.end(), e) != seen.end()) return false;
    for (int d : down_set(e)) {
      if (std::find(seen.begin(), seen.end(), d) == seen.end()) return false;
    }
    seen.push_back(e);
  }
  return true;
}

std::optional<int> CausalSetGenerator::element_by_label(double lbl, int horizon) const {
  if (auto sz = size()) horizon = std::min(horizon, *sz);
  for (int i = 0; i < horizon; ++i) {
    if (label(i) == lbl) return i;
  }
  return std::nullopt;
}

CausalSetGenerator parse_model_string(const std::string& spec) {
  if (spec == "ladder") return CausalSetGenerator::ladder();
  if (spec == "two-chains") return CausalSetGenerator::two_chains();
  if (spec == "grid") return CausalSetGenerator::grid();
  if (spec.rfind("chains:", 0) == 0) {
    int m = 0, t = 0;
    if (std::sscanf(spec.c_str(), "chains:%d,%d", &m, &t) != 2) {
      throw std::invalid_argument("model spec '" + spec + "': expected chains:m,t");
    }
    return CausalSetGenerator::disjoint_chains(m, t);
  }
  if (spec.rfind("dary:", 0) == 0) {
    int d = 0;
    if (std::sscanf(spec.c_str(), "dary:%d", &d) != 1) {
      throw std::invalid_argument("model spec '" + spec + "': expected dary:d");
    }
    return CausalSetGenerator::dary_tree(d);
  }
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model spec: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return CausalSetGenerator::custom(parse_poset_text(buf.str()));
  }
  throw std::invalid_argument(
      "unknown model spec '" + spec +
      "' (expected ladder | two-chains | grid | chains:m,t | dary:d | file:<path>)");
}

}  // namespace causetlab

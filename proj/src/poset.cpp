#include "causetlab/poset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace causetlab {

int max_poset_n() {
  static const int cap = [] {
    const char* env = std::getenv("CAUSETLAB_MAX_N");
    if (!env || !*env) return kMaxPosetN;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > kMaxPosetN) {
      throw std::invalid_argument(
          std::string("CAUSETLAB_MAX_N must be an integer in [1,") +
          std::to_string(kMaxPosetN) + "], got '" + env + "'");
    }
    return static_cast<int>(v);
  }();
  return cap;
}

static void check_n(int n) {
  if (n < 0 || n > max_poset_n()) {
    throw std::invalid_argument("poset size " + std::to_string(n) + " outside [0," +
                                std::to_string(max_poset_n()) + "]");
  }
}

FinitePoset FinitePoset::from_relations(int n, const std::vector<std::pair<int, int>>& less_pairs) {
  check_n(n);
  FinitePoset p;
  p.n = n;
  for (auto [i, j] : less_pairs) {
    if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
      throw std::invalid_argument("relation (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range for n=" + std::to_string(n));
    }
    p.below[j] |= Mask(1) << i;
  }
  // transitive closure: one Floyd-Warshall sweep over intermediate k
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if ((p.below[j] >> k) & 1u) p.below[j] |= p.below[k];
    }
  }
  for (int i = 0; i < n; ++i) {
    if ((p.below[i] >> i) & 1u) throw std::invalid_argument("relations contain a cycle");
  }
  for (int j = 0; j < n; ++j) {
    Mask m = p.below[j];
    while (m) {
      const int i = lowest_bit(m);
      m &= m - 1;
      p.above[i] |= Mask(1) << j;
    }
  }
  return p;
}

FinitePoset FinitePoset::antichain(int n) { return from_relations(n, {}); }

FinitePoset FinitePoset::chain(int n) {
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
  return from_relations(n, rel);
}

FinitePoset FinitePoset::induced(Mask keep) const {
  std::vector<int> ids;
  for (int i = 0; i < n; ++i)
    if ((keep >> i) & 1u) ids.push_back(i);
  FinitePoset q;
  q.n = static_cast<int>(ids.size());
  for (int a = 0; a < q.n; ++a) {
    for (int b = 0; b < q.n; ++b) {
      if (less(ids[a], ids[b])) {
        q.above[a] |= Mask(1) << b;
        q.below[b] |= Mask(1) << a;
      }
    }
  }
  if (has_labels()) {
    q.labels.reserve(ids.size());
    for (int id : ids) q.labels.push_back(labels[id]);
  }
  return q;
}

bool FinitePoset::is_standard_suborder() const {
  for (int i = 0; i < n; ++i) {
    if (below[i] & ~((Mask(1) << i) - 1)) return false;
  }
  return true;
}

Mask FinitePoset::down_closure(Mask s) const {
  Mask r = s;
  Mask m = s;
  while (m) {
    const int i = lowest_bit(m);
    m &= m - 1;
    r |= below[i];
  }
  return r;
}

Mask FinitePoset::up_closure(Mask s) const {
  Mask r = s;
  Mask m = s;
  while (m) {
    const int i = lowest_bit(m);
    m &= m - 1;
    r |= above[i];
  }
  return r;
}

std::vector<int> FinitePoset::minimal_elements(Mask removed) const {
  if (!is_down_set(removed)) {
    throw std::invalid_argument("minimal_elements: removed set is not a down-set");
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if ((removed >> i) & 1u) continue;
    if ((below[i] & ~removed) == 0) out.push_back(i);
  }
  return out;
}

std::vector<int> FinitePoset::maximal_elements(Mask within) const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!((within >> i) & 1u)) continue;
    if ((above[i] & within) == 0) out.push_back(i);
  }
  return out;
}

CoverInfo covering_pairs(const FinitePoset& p) {
  CoverInfo info;
  for (int i = 0; i < p.n; ++i) {
    for (int j = 0; j < p.n; ++j) {
      if (!p.less(i, j)) continue;
      if ((p.above[i] & p.below[j]) == 0) {
        info.covers.emplace_back(i, j);
      }
    }
  }
  info.c = static_cast<long long>(info.covers.size());
  long long related = 0;
  for (int i = 0; i < p.n; ++i) related += popcount(p.above[i]);
  info.b = static_cast<long long>(p.n) * (p.n - 1) / 2 - related;
  return info;
}

FinitePoset apply_permutation(const FinitePoset& p, const std::vector<int>& lambda) {
  if (static_cast<int>(lambda.size()) != p.n) {
    throw std::invalid_argument("apply_permutation: bijection size mismatch");
  }
  Mask seen = 0;
  for (int v : lambda) {
    if (v < 0 || v >= p.n || ((seen >> v) & 1u)) {
      throw std::invalid_argument("apply_permutation: not a bijection of [n]");
    }
    seen |= Mask(1) << v;
  }
  FinitePoset q;
  q.n = p.n;
  for (int i = 0; i < p.n; ++i) {
    for (int j = 0; j < p.n; ++j) {
      if (p.less(lambda[i], lambda[j])) {
        q.above[i] |= Mask(1) << j;
        q.below[j] |= Mask(1) << i;
      }
    }
  }
  if (p.has_labels()) {
    q.labels.resize(p.n);
    for (int i = 0; i < p.n; ++i) q.labels[i] = p.labels[lambda[i]];
  }
  return q;
}

std::vector<Mask> enumerate_down_sets(const FinitePoset& p, std::size_t budget) {
  std::vector<Mask> all;
  all.push_back(0);
  std::vector<Mask> layer{0};
  std::vector<Mask> next;
  const Mask full = p.all_mask();
  while (!layer.empty()) {
    next.clear();
    for (Mask d : layer) {
      if (d == full) continue;
      for (int x = 0; x < p.n; ++x) {
        if ((d >> x) & 1u) continue;
        if ((p.below[x] & ~d) == 0) next.push_back(d | (Mask(1) << x));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (all.size() + next.size() > budget) throw LatticeOverflow(all.size() + next.size());
    all.insert(all.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return all;  // BFS by size; each layer already mask-sorted
}

namespace {

std::uint64_t relabeled_code(const FinitePoset& p, const std::vector<int>& lambda) {
  // pairs (s,t) with s<t scanned in lexicographic order; bit set when
  // lambda(s) < lambda(t) in p.
  std::uint64_t code = 0;
  int bit = 0;
  for (int s = 0; s < p.n; ++s) {
    for (int t = s + 1; t < p.n; ++t, ++bit) {
      if (p.less(lambda[s], lambda[t])) code |= std::uint64_t(1) << bit;
    }
  }
  return code;
}

void canon_dfs(const FinitePoset& p, Mask placed, std::vector<int>& lambda, std::uint64_t& best) {
  if (static_cast<int>(lambda.size()) == p.n) {
    best = std::min(best, relabeled_code(p, lambda));
    return;
  }
  for (int x = 0; x < p.n; ++x) {
    if ((placed >> x) & 1u) continue;
    if ((p.below[x] & ~placed) != 0) continue;  // not minimal in the remainder
    lambda.push_back(x);
    canon_dfs(p, placed | (Mask(1) << x), lambda, best);
    lambda.pop_back();
  }
}

}  // namespace

std::uint64_t canonical_code(const FinitePoset& p) {
  if (p.n > 9) throw std::invalid_argument("canonical_code: supported for n <= 9 only");
  std::uint64_t best = ~std::uint64_t(0);
  std::vector<int> lambda;
  lambda.reserve(p.n);
  canon_dfs(p, 0, lambda, best);
  if (p.n == 0) best = 0;
  return best;
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw std::invalid_argument("poset text line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

FinitePoset parse_poset_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  int n = -1;
  std::vector<std::pair<int, int>> rel;
  std::vector<std::pair<int, double>> label_lines;
  std::vector<std::size_t> rel_line_no;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trimmed(line);
    if (line.empty()) continue;
    if (n < 0) {
      int v = 0;
      if (std::sscanf(line.c_str(), "n=%d", &v) != 1 || v < 0) {
        parse_fail(line_no, "expected 'n=<int>' first, got '" + line + "'");
      }
      if (v > max_poset_n()) {
        parse_fail(line_no, "n=" + std::to_string(v) + " exceeds the cap " +
                                std::to_string(max_poset_n()));
      }
      n = v;
      continue;
    }
    if (line.rfind("label", 0) == 0) {
      int idx = 0;
      double v = 0;
      if (std::sscanf(line.c_str(), "label %d %lf", &idx, &v) != 2) {
        parse_fail(line_no, "expected 'label <i> <value>', got '" + line + "'");
      }
      if (idx < 1 || idx > n) parse_fail(line_no, "label index out of range");
      if (v < 0.0 || v > 1.0) parse_fail(line_no, "label outside [0,1]");
      label_lines.emplace_back(idx - 1, v);
      continue;
    }
    int i = 0, j = 0;
    if (std::sscanf(line.c_str(), "%d<%d", &i, &j) != 2) {
      parse_fail(line_no, "expected 'i<j', got '" + line + "'");
    }
    if (i < 1 || i > n || j < 1 || j > n || i == j) {
      parse_fail(line_no, "relation indices out of range or equal");
    }
    rel.emplace_back(i - 1, j - 1);
    rel_line_no.push_back(line_no);
  }
  if (n < 0) throw std::invalid_argument("poset text: missing 'n=<int>' header");
  FinitePoset p;
  try {
    p = FinitePoset::from_relations(n, rel);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("poset text: ") + e.what());
  }
  if (!label_lines.empty()) {
    if (label_lines.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("poset text: labels must cover all elements or none");
    }
    p.labels.assign(n, -1.0);
    for (auto [idx, v] : label_lines) {
      if (p.labels[idx] >= 0.0) {
        throw std::invalid_argument("poset text: duplicate label line for element " +
                                    std::to_string(idx + 1));
      }
      p.labels[idx] = v;
    }
    std::vector<double> sorted = p.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("poset text: labels must be distinct");
    }
  }
  return p;
}

std::string poset_to_text(const FinitePoset& p) {
  std::ostringstream out;
  out << "n=" << p.n << "\n";
  for (auto [i, j] : covering_pairs(p).covers) {
    out << (i + 1) << "<" << (j + 1) << "\n";
  }
  if (p.has_labels()) {
    char buf[64];
    for (int i = 0; i < p.n; ++i) {
      std::snprintf(buf, sizeof buf, "label %d %.17g", i + 1, p.labels[i]);
      out << buf << "\n";
    }
  }
  return out.str();
}

}  // namespace causetlab

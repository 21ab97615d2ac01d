#include "causetlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "causetlab/lw_coupling.hpp"

namespace causetlab {

namespace {

constexpr double kPhi = 0.61803398874989484820458683436563811772;

double hash_label(std::uint64_t salt, std::uint64_t i) {
  return static_cast<double>(mix64(salt ^ ((i + 1) * 0x9E3779B97F4A7C15ULL)) >> 11) * 0x1.0p-53;
}

// Exact Bernoulli draw for rational p.
bool bernoulli_rational(Rng& rng, const Rational& p) {
  const BigInt& num = p.get_num();
  const BigInt& den = p.get_den();
  if (mpz_fits_ulong_p(den.get_mpz_t())) {
    std::uint64_t d = mpz_get_ui(den.get_mpz_t());
    std::uint64_t n = mpz_get_ui(num.get_mpz_t());
    return rng.next_below(d) < n;
  }
  return uniform_bigint_below(rng, den) < num;
}

Rational rational_pow(const Rational& base, unsigned e) {
  if (e == 0) return Rational(1);
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  r.canonicalize();
  return r;
}

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// OmegaPrefix

bool OmegaPrefix::less(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size() || i >= j) return false;
  const auto& d = delta[j];
  return std::binary_search(d.begin(), d.end(), i);
}

FinitePoset OmegaPrefix::prefix_order(int n) const {
  if (n < 0 || n > size()) throw std::invalid_argument("prefix_order: length out of range");
  if (n > max_poset_n()) throw std::invalid_argument("prefix_order: length exceeds element cap");
  FinitePoset p;
  p.n = n;
  for (int j = 0; j < n; ++j) {
    for (int i : delta[j]) {
      p.below[j] |= Mask(1) << i;
      p.above[i] |= Mask(1) << j;
    }
  }
  p.labels.assign(labels.begin(), labels.begin() + n);
  return p;
}

void OmegaPrefix::append(double label, std::vector<int> down, int element_id) {
  std::sort(down.begin(), down.end());
  labels.push_back(label);
  delta.push_back(std::move(down));
  element_ids.push_back(element_id);
}

std::string OmegaPrefix::serialize() const {
  std::ostringstream out;
  out << "# kernel: " << kernel_name << "\n";
  out << "# seed: " << seed << "\n";
  out << "# collisions: " << label_collisions << "\n";
  char buf[64];
  for (int j = 0; j < size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", labels[j]);
    out << (j + 1) << ' ' << buf << ' ';
    if (delta[j].empty()) {
      out << '-';
    } else {
      for (std::size_t t = 0; t < delta[j].size(); ++t) {
        if (t) out << ',';
        out << delta[j][t] + 1;
      }
    }
    out << ' ';
    if (element_ids[j] < 0)
      out << '-';
    else
      out << element_ids[j];
    out << '\n';
  }
  return out.str();
}

OmegaPrefix OmegaPrefix::parse(const std::string& text) {
  OmegaPrefix omega;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("history line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::istringstream hs(line.substr(start + 1));
      std::string key;
      hs >> key;
      if (key == "kernel:") {
        std::string rest;
        std::getline(hs, rest);
        std::size_t a = rest.find_first_not_of(" \t");
        std::size_t b = rest.find_last_not_of(" \t\r");
        omega.kernel_name = (a == std::string::npos) ? "" : rest.substr(a, b - a + 1);
      } else if (key == "seed:") {
        hs >> omega.seed;
      } else if (key == "collisions:") {
        hs >> omega.label_collisions;
      }
      continue;
    }
    std::istringstream ls(line);
    int k = 0;
    std::string label_tok, delta_tok, id_tok;
    if (!(ls >> k >> label_tok >> delta_tok)) fail("expected 'k label down-set [id]'");
    ls >> id_tok;
    if (k != omega.size() + 1) fail("step index out of sequence");
    char* end = nullptr;
    double label = std::strtod(label_tok.c_str(), &end);
    if (end == label_tok.c_str() || *end != '\0') fail("bad label '" + label_tok + "'");
    std::vector<int> down;
    if (delta_tok != "-") {
      std::istringstream ds(delta_tok);
      std::string item;
      while (std::getline(ds, item, ',')) {
        char* e2 = nullptr;
        long v = std::strtol(item.c_str(), &e2, 10);
        if (e2 == item.c_str() || *e2 != '\0') fail("bad down-set entry '" + item + "'");
        if (v < 1 || v >= k) fail("down-set entry out of range");
        down.push_back(static_cast<int>(v - 1));
      }
    }
    std::sort(down.begin(), down.end());
    if (std::adjacent_find(down.begin(), down.end()) != down.end())
      fail("repeated down-set entry");
    // down-sets must be transitively closed with respect to earlier steps
    for (int i : down)
      for (int h : omega.delta[i])
        if (!std::binary_search(down.begin(), down.end(), h))
          fail("down-set not downward closed");
    for (double prev : omega.labels)
      if (prev == label) fail("repeated label");
    int id = -1;
    if (!id_tok.empty() && id_tok != "-") {
      char* e3 = nullptr;
      long v = std::strtol(id_tok.c_str(), &e3, 10);
      if (e3 == id_tok.c_str() || *e3 != '\0') fail("bad element id '" + id_tok + "'");
      id = static_cast<int>(v);
    }
    omega.labels.push_back(label);
    omega.delta.push_back(std::move(down));
    omega.element_ids.push_back(id);
  }
  return omega;
}

// ---------------------------------------------------------------------------
// LabelDistribution

LabelDistribution LabelDistribution::uniform01() {
  return LabelDistribution({{Rational(0), Rational(1), Rational(1)}});
}

LabelDistribution LabelDistribution::piecewise(std::vector<LabelPiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("label distribution: no pieces");
  Rational total(0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (p.lo < 0 || p.hi > 1 || !(p.lo < p.hi))
      throw std::invalid_argument("label distribution: piece endpoints must satisfy 0 <= lo < hi <= 1");
    if (p.weight <= 0) throw std::invalid_argument("label distribution: piece weights must be positive");
    if (i > 0 && pieces[i - 1].hi > p.lo)
      throw std::invalid_argument("label distribution: pieces must be disjoint and ascending");
    total += p.weight;
  }
  if (total != 1) throw std::invalid_argument("label distribution: weights must sum to 1");
  return LabelDistribution(std::move(pieces));
}

double LabelDistribution::sample(Rng& rng) const {
  std::size_t idx = 0;
  if (pieces_.size() > 1) {
    std::vector<Rational> w;
    w.reserve(pieces_.size());
    for (const auto& p : pieces_) w.push_back(p.weight);
    idx = weighted_choice_rational(rng, w);
  }
  const auto& p = pieces_[idx];
  double lo = to_double(p.lo), hi = to_double(p.hi);
  return lo + (hi - lo) * rng.next_unit();
}

Rational LabelDistribution::measure_interval(const Rational& lo, const Rational& hi) const {
  if (hi <= lo) return Rational(0);
  Rational m(0);
  for (const auto& p : pieces_) {
    Rational a = std::max(lo, p.lo), b = std::min(hi, p.hi);
    if (a < b) m += p.weight * (b - a) / (p.hi - p.lo);
  }
  return m;
}

Json LabelDistribution::to_json() const {
  if (pieces_.size() == 1 && pieces_[0].lo == 0 && pieces_[0].hi == 1)
    return Json{{"kind", "uniform01"}};
  Json arr = Json::array();
  for (const auto& p : pieces_)
    arr.push_back(Json{{"lo", rational_str(p.lo)}, {"hi", rational_str(p.hi)}, {"weight", rational_str(p.weight)}});
  return Json{{"kind", "piecewise"}, {"pieces", arr}};
}

namespace {
Rational rational_from_json(const Json& j) {
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected a rational (string or number), got " + j.dump());
}
}  // namespace

LabelDistribution LabelDistribution::from_json(const Json& j) {
  std::string kind = j.value("kind", "uniform01");
  if (kind == "uniform01") return uniform01();
  if (kind != "piecewise") throw std::invalid_argument("unknown label distribution kind '" + kind + "'");
  std::vector<LabelPiece> pieces;
  for (const auto& pj : j.at("pieces"))
    pieces.push_back({rational_from_json(pj.at("lo")), rational_from_json(pj.at("hi")),
                      rational_from_json(pj.at("weight"))});
  return piecewise(std::move(pieces));
}

// ---------------------------------------------------------------------------
// GrowthKernel defaults

int GrowthKernel::step_light(KernelState& state, Rng& rng) const {
  return step(state, rng).element_id;
}

std::vector<AtomicOption> GrowthKernel::step_distribution(const KernelState&) const {
  throw std::logic_error(name() + ": exact step law unavailable (kernel is not atomic)");
}

void GrowthKernel::advance_with(KernelState&, const AtomicOption&) const {
  throw std::logic_error(name() + ": exact step law unavailable (kernel is not atomic)");
}

std::vector<double> GrowthKernel::persistent_labels(int) const { return {}; }

// ---------------------------------------------------------------------------
// Fixed-structure kernels

namespace {

struct FixedState final : KernelState {
  std::vector<int> seq;        // model ids in generation order
  std::vector<int> pos_of;     // model id -> position, or -1
  std::vector<int> available;  // sorted model ids whose lower covers are all generated
  std::unordered_map<int, int> pending;  // ungenerated lower-cover counts
  long long m0 = 0;            // chain-0 elements generated (two-chains bookkeeping)

  std::unique_ptr<KernelState> clone() const override {
    return std::make_unique<FixedState>(*this);
  }
  int count() const override { return static_cast<int>(seq.size()); }
  int position(int id) const {
    return (id >= 0 && id < static_cast<int>(pos_of.size())) ? pos_of[id] : -1;
  }
};

class FixedPosetKernel final : public GrowthKernel {
 public:
  FixedPosetKernel(CausalSetGenerator model, SelectionRule rule, Rational param)
      : model_(std::move(model)), rule_(rule), q_(std::move(param)) {
    switch (rule_) {
      case SelectionRule::golden:
        if (model_.kind() != ModelKind::ladder)
          throw std::invalid_argument("golden selection rule is defined on the ladder model");
        break;
      case SelectionRule::half:
        break;
      case SelectionRule::chain_weight:
        if (model_.kind() != ModelKind::two_chains)
          throw std::invalid_argument("chain-weight selection rule needs the two-chains model");
        if (q_ < 0 || q_ > 1)
          throw std::invalid_argument("chain weight must lie in [0,1]");
        break;
      case SelectionRule::polya_urn:
        if (model_.kind() != ModelKind::two_chains)
          throw std::invalid_argument("urn selection rule needs the two-chains model");
        break;
    }
  }

  std::string name() const override {
    switch (rule_) {
      case SelectionRule::golden: return model_.name() + "_golden";
      case SelectionRule::half: return model_.name() + "_half";
      case SelectionRule::chain_weight: return "two_chains_q";
      case SelectionRule::polya_urn: return "polya_urn";
    }
    return "fixed";
  }

  Json config_json() const override {
    Json j{{"kind", "fixed"}, {"model", model_.name()}};
    switch (rule_) {
      case SelectionRule::golden: j["rule"] = "golden"; break;
      case SelectionRule::half: j["rule"] = "half"; break;
      case SelectionRule::chain_weight:
        j["rule"] = "chain_weight";
        j["q"] = rational_str(q_);
        break;
      case SelectionRule::polya_urn: j["rule"] = "polya_urn"; break;
    }
    return j;
  }

  bool is_atomic() const override { return true; }

  std::unique_ptr<KernelState> initial_state() const override {
    auto st = std::make_unique<FixedState>();
    st->available = sorted_copy(model_.initial_minimals());
    return st;
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<FixedState&>(state);
    int x = choose(s, rng);
    StepRecord rec{x, delta_of(s, x), model_.label(x)};
    place(s, x);
    return rec;
  }

  int step_light(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<FixedState&>(state);
    int x = choose(s, rng);
    place(s, x);
    return x;
  }

  std::vector<AtomicOption> step_distribution(const KernelState& state) const override {
    const auto& s = dynamic_cast<const FixedState&>(state);
    std::vector<AtomicOption> opts;
    for (auto& [x, w] : weights(s)) {
      if (w.is_zero()) continue;
      opts.push_back({x, delta_of(s, x), model_.label(x), w});
    }
    return opts;
  }

  void advance_with(KernelState& state, const AtomicOption& opt) const override {
    auto& s = dynamic_cast<FixedState&>(state);
    if (!std::binary_search(s.available.begin(), s.available.end(), opt.element_id))
      throw std::invalid_argument("advance_with: element is not currently available");
    place(s, opt.element_id);
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    if (upto < 0 || upto > omega.size())
      throw std::invalid_argument("state_from_prefix: length out of range");
    auto st = std::make_unique<FixedState>();
    st->available = sorted_copy(model_.initial_minimals());
    for (int j = 0; j < upto; ++j) {
      int id = omega.element_ids[j];
      if (id < 0) {
        auto found = model_.element_by_label(omega.labels[j]);
        if (!found) throw std::invalid_argument("history labels are not labels of this model");
        id = *found;
      }
      if (!std::binary_search(st->available.begin(), st->available.end(), id))
        throw std::invalid_argument("history is not an ordered stem of this model");
      if (delta_of(*st, id) != omega.delta[j])
        throw std::invalid_argument("history down-set disagrees with the model order");
      place(*st, id);
    }
    return st;
  }

  std::vector<double> persistent_labels(int horizon) const override {
    int n = horizon;
    if (model_.size()) n = std::min(n, *model_.size());
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(model_.label(i));
    return out;
  }

  const CausalSetGenerator& model() const { return model_; }

 private:
  std::vector<int> delta_of(const FixedState& s, int x) const {
    std::vector<int> d;
    for (int y : model_.down_set(x)) {
      int pos = s.position(y);
      if (pos < 0) throw std::logic_error("element chosen before its down-set was generated");
      d.push_back(pos);
    }
    std::sort(d.begin(), d.end());
    return d;
  }

  void place(FixedState& s, int x) const {
    int pos = static_cast<int>(s.seq.size());
    s.seq.push_back(x);
    if (static_cast<int>(s.pos_of.size()) <= x) s.pos_of.resize(x + 1, -1);
    s.pos_of[x] = pos;
    auto it = std::lower_bound(s.available.begin(), s.available.end(), x);
    s.available.erase(it);
    for (int u : model_.covers_up(x)) {
      auto [pit, fresh] = s.pending.try_emplace(u, static_cast<int>(model_.covers_down(u).size()));
      if (--pit->second == 0) {
        s.pending.erase(pit);
        s.available.insert(std::lower_bound(s.available.begin(), s.available.end(), u), u);
      }
    }
    if (model_.kind() == ModelKind::two_chains && x % 2 == 0) ++s.m0;
  }

  int choose(const FixedState& s, Rng& rng) const {
    const auto& av = s.available;
    if (av.empty()) throw std::logic_error("no available element to generate");
    switch (rule_) {
      case SelectionRule::golden:
        if (av.size() == 1) return av[0];
        if (av.size() != 2) throw std::logic_error("golden rule expects at most two available elements");
        return rng.next_unit() < kPhi ? av[0] : av[1];
      case SelectionRule::half:
        return av[rng.next_below(av.size())];
      case SelectionRule::chain_weight: {
        int even = av[0] % 2 == 0 ? av[0] : av[1];
        int odd = av[0] % 2 == 0 ? av[1] : av[0];
        return bernoulli_rational(rng, q_) ? even : odd;
      }
      case SelectionRule::polya_urn: {
        int even = av[0] % 2 == 0 ? av[0] : av[1];
        int odd = av[0] % 2 == 0 ? av[1] : av[0];
        std::uint64_t k = s.seq.size();
        return rng.next_below(k + 2) < static_cast<std::uint64_t>(s.m0) + 1 ? even : odd;
      }
    }
    throw std::logic_error("unreachable");
  }

  std::vector<std::pair<int, Golden>> weights(const FixedState& s) const {
    const auto& av = s.available;
    if (av.empty()) throw std::logic_error("no available element to generate");
    std::vector<std::pair<int, Golden>> w;
    switch (rule_) {
      case SelectionRule::golden:
        if (av.size() == 1) {
          w.emplace_back(av[0], Golden(1));
        } else if (av.size() == 2) {
          w.emplace_back(av[0], Golden::g());
          w.emplace_back(av[1], Golden(1) - Golden::g());
        } else {
          throw std::logic_error("golden rule expects at most two available elements");
        }
        break;
      case SelectionRule::half:
        for (int x : av) w.emplace_back(x, Golden(Rational(1, static_cast<long>(av.size()))));
        break;
      case SelectionRule::chain_weight:
        for (int x : av) w.emplace_back(x, Golden(x % 2 == 0 ? q_ : 1 - q_));
        break;
      case SelectionRule::polya_urn: {
        Rational pb(static_cast<long>(s.m0) + 1, static_cast<long>(s.seq.size()) + 2);
        pb.canonicalize();
        for (int x : av) w.emplace_back(x, Golden(x % 2 == 0 ? pb : 1 - pb));
        break;
      }
    }
    return w;
  }

  CausalSetGenerator model_;
  SelectionRule rule_;
  Rational q_;
};

// ---------------------------------------------------------------------------
// Kernels whose state is just the realized down-set structure.

struct ClosureState final : KernelState {
  std::vector<std::vector<int>> delta;
  std::unique_ptr<KernelState> clone() const override {
    return std::make_unique<ClosureState>(*this);
  }
  int count() const override { return static_cast<int>(delta.size()); }
};

std::unique_ptr<KernelState> closure_state_from_prefix(const OmegaPrefix& omega, int upto) {
  if (upto < 0 || upto > omega.size())
    throw std::invalid_argument("state_from_prefix: length out of range");
  auto st = std::make_unique<ClosureState>();
  for (int j = 0; j < upto; ++j) {
    const auto& d = omega.delta[j];
    for (int i : d)
      for (int h : omega.delta[i])
        if (!std::binary_search(d.begin(), d.end(), h))
          throw std::invalid_argument("history down-sets are not transitively closed");
    st->delta.push_back(d);
  }
  return st;
}

// Union of {j} and delta[j] over chosen seeds, as a sorted vector.
std::vector<int> downward_closure(const std::vector<std::vector<int>>& delta,
                                  const std::vector<int>& seeds) {
  std::vector<char> in(delta.size(), 0);
  for (int j : seeds) {
    in[j] = 1;
    for (int i : delta[j]) in[i] = 1;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.push_back(static_cast<int>(i));
  return out;
}

class RgoKernel final : public GrowthKernel {
 public:
  explicit RgoKernel(Rational p) : p_(std::move(p)) {
    if (p_ < 0 || p_ > 1) throw std::invalid_argument("edge probability must lie in [0,1]");
  }

  std::string name() const override { return "random_graph_order"; }
  Json config_json() const override {
    return Json{{"kind", "random_graph_order"}, {"p", rational_str(p_)}};
  }
  bool is_atomic() const override { return false; }

  std::unique_ptr<KernelState> initial_state() const override {
    return std::make_unique<ClosureState>();
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<ClosureState&>(state);
    double label = rng.next_unit();
    std::vector<int> seeds;
    for (int j = 0; j < s.count(); ++j)
      if (bernoulli_rational(rng, p_)) seeds.push_back(j);
    std::vector<int> d = downward_closure(s.delta, seeds);
    s.delta.push_back(d);
    return {-1, std::move(d), label};
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    return closure_state_from_prefix(omega, upto);
  }

 private:
  Rational p_;
};

class CsgKernel final : public GrowthKernel {
 public:
  explicit CsgKernel(std::vector<Rational> t) : t_(std::move(t)) {
    if (t_.empty()) throw std::invalid_argument("subset-weight kernel: empty weight sequence");
    bool positive = false;
    for (const auto& w : t_) {
      if (w < 0) throw std::invalid_argument("subset-weight kernel: weights must be non-negative");
      if (w > 0) positive = true;
    }
    if (!positive) throw std::invalid_argument("subset-weight kernel: all weights are zero");
  }

  std::string name() const override { return "csg"; }
  Json config_json() const override {
    Json arr = Json::array();
    for (const auto& w : t_) arr.push_back(rational_str(w));
    return Json{{"kind", "csg"}, {"t", arr}};
  }
  bool is_atomic() const override { return false; }

  std::unique_ptr<KernelState> initial_state() const override {
    return std::make_unique<ClosureState>();
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<ClosureState&>(state);
    int k = s.count();
    double label = rng.next_unit();
    int smax = std::min<int>(k, static_cast<int>(t_.size()) - 1);
    std::vector<Rational> w(smax + 1);
    bool any = false;
    for (int sz = 0; sz <= smax; ++sz) {
      w[sz] = Rational(binomial(k, sz)) * t_[sz];
      if (w[sz] > 0) any = true;
    }
    if (!any)
      throw std::runtime_error("subset-weight kernel: all subset weights vanish at this state");
    int sz = static_cast<int>(weighted_choice_rational(rng, w));
    // uniform size-sz subset of [k] by partial Fisher-Yates
    std::vector<int> pool(k);
    for (int i = 0; i < k; ++i) pool[i] = i;
    std::vector<int> seeds;
    for (int i = 0; i < sz; ++i) {
      std::uint64_t r = rng.next_below(k - i);
      seeds.push_back(pool[i + r]);
      std::swap(pool[i], pool[i + r]);
    }
    std::vector<int> d = downward_closure(s.delta, seeds);
    s.delta.push_back(d);
    return {-1, std::move(d), label};
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    return closure_state_from_prefix(omega, upto);
  }

 private:
  std::vector<Rational> t_;
};

// ---------------------------------------------------------------------------
// Independent-label antichain kernel

struct CountState final : KernelState {
  int k = 0;
  std::unique_ptr<KernelState> clone() const override { return std::make_unique<CountState>(*this); }
  int count() const override { return k; }
};

class IidAntichainKernel final : public GrowthKernel {
 public:
  explicit IidAntichainKernel(LabelDistribution rho) : rho_(std::move(rho)) {}

  std::string name() const override { return "iid_antichain"; }
  Json config_json() const override {
    return Json{{"kind", "iid_antichain"}, {"rho", rho_.to_json()}};
  }
  bool is_atomic() const override { return false; }

  std::unique_ptr<KernelState> initial_state() const override {
    return std::make_unique<CountState>();
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<CountState&>(state);
    ++s.k;
    return {-1, {}, rho_.sample(rng)};
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    if (upto < 0 || upto > omega.size())
      throw std::invalid_argument("state_from_prefix: length out of range");
    for (int j = 0; j < upto; ++j)
      if (!omega.delta[j].empty())
        throw std::invalid_argument("antichain kernel cannot have produced comparable elements");
    auto st = std::make_unique<CountState>();
    st->k = upto;
    return st;
  }

  const LabelDistribution& rho() const { return rho_; }

 private:
  LabelDistribution rho_;
};

// ---------------------------------------------------------------------------
// Chain-with-marks kernel: a persistent spine y_1 < y_2 < ... plus maximal
// mark elements hanging over spine prefixes.

class ChainMarksKernel final : public GrowthKernel {
 public:
  ChainMarksKernel(std::vector<Rational> p, Rational tail, std::vector<LabelDistribution> marks)
      : p_(std::move(p)), tail_(std::move(tail)), marks_(std::move(marks)) {
    if (p_.empty() || p_[0] != 1)
      throw std::invalid_argument("chain-with-marks: level weights must start at 1");
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (p_[i] <= 0) throw std::invalid_argument("chain-with-marks: level weights must be positive");
      if (i > 0 && p_[i] > p_[i - 1])
        throw std::invalid_argument("chain-with-marks: level weights must be non-increasing");
    }
    if (tail_ <= 0 || tail_ >= 1)
      throw std::invalid_argument("chain-with-marks: tail ratio must lie in (0,1)");
  }

  std::string name() const override { return "chain_with_marks"; }

  Json config_json() const override {
    Json arr = Json::array();
    for (const auto& w : p_) arr.push_back(rational_str(w));
    Json j{{"kind", "chain_with_marks"}, {"p", arr}, {"tail_ratio", rational_str(tail_)}};
    if (!marks_.empty()) {
      Json ms = Json::array();
      for (const auto& m : marks_) ms.push_back(m.to_json());
      j["marks"] = ms;
    }
    return j;
  }

  bool is_atomic() const override { return false; }

  struct ChainState final : KernelState {
    std::vector<int> spine_pos;  // positions of spine elements, ascending
    int total = 0;
    std::unique_ptr<KernelState> clone() const override {
      return std::make_unique<ChainState>(*this);
    }
    int count() const override { return total; }
  };

  std::unique_ptr<KernelState> initial_state() const override {
    return std::make_unique<ChainState>();
  }

  // Level weight p_r (1-based), extended geometrically past the explicit list.
  Rational level_weight(int r) const {
    if (r <= static_cast<int>(p_.size())) return p_[r - 1];
    Rational w = p_.back();
    for (int i = static_cast<int>(p_.size()); i < r; ++i) w *= tail_;
    return w;
  }

  double spine_label(int r) const { return hash_label(kSalt, static_cast<std::uint64_t>(r)); }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<ChainState&>(state);
    int sp = static_cast<int>(s.spine_pos.size());
    // option 0: next spine element; option j (1..sp): mark over the first j spine elements
    std::vector<Rational> w(sp + 1);
    w[0] = level_weight(sp + 1);
    for (int j = 1; j <= sp; ++j) w[j] = level_weight(j) - level_weight(j + 1);
    std::size_t pick = weighted_choice_rational(rng, w);
    StepRecord rec;
    if (pick == 0) {
      rec.element_id = sp + 1;
      rec.delta = s.spine_pos;
      rec.label = spine_label(sp + 1);
      s.spine_pos.push_back(s.total);
    } else {
      int j = static_cast<int>(pick);
      rec.element_id = -1;
      rec.delta.assign(s.spine_pos.begin(), s.spine_pos.begin() + j);
      rec.label = mark_law(j).sample(rng);
    }
    ++s.total;
    return rec;
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    if (upto < 0 || upto > omega.size())
      throw std::invalid_argument("state_from_prefix: length out of range");
    auto st = std::make_unique<ChainState>();
    for (int j = 0; j < upto; ++j) {
      const auto& d = omega.delta[j];
      int sp = static_cast<int>(st->spine_pos.size());
      bool spine = static_cast<int>(d.size()) == sp && d == st->spine_pos &&
                   omega.labels[j] == spine_label(sp + 1);
      if (spine) {
        st->spine_pos.push_back(j);
      } else {
        int lvl = static_cast<int>(d.size());
        if (lvl < 1 || lvl > sp || !std::equal(d.begin(), d.end(), st->spine_pos.begin()))
          throw std::invalid_argument("history element is neither a spine element nor a mark");
      }
      ++st->total;
    }
    return st;
  }

  std::vector<double> persistent_labels(int horizon) const override {
    std::vector<double> out;
    out.reserve(horizon);
    for (int r = 1; r <= horizon; ++r) out.push_back(spine_label(r));
    return out;
  }

 private:
  static constexpr std::uint64_t kSalt = 0x5ca1ab1e0ddba11ULL;
  const LabelDistribution& mark_law(int level) const {
    static const LabelDistribution unif = LabelDistribution::uniform01();
    if (level >= 1 && level <= static_cast<int>(marks_.size())) return marks_[level - 1];
    return unif;
  }

  std::vector<Rational> p_;
  Rational tail_;
  std::vector<LabelDistribution> marks_;
};

// ---------------------------------------------------------------------------
// Marked-poset kernel: unmarked elements of a finite order are generated once
// each; marked (maximal) elements recur forever with fixed weights.

class MarkedKernel final : public GrowthKernel {
 public:
  MarkedKernel(FinitePoset q, Mask marked, std::vector<Rational> mark_weights,
               std::vector<LabelDistribution> mark_labels, std::vector<Rational> base_weights)
      : q_(std::move(q)), marked_(marked) {
    int n = q_.n;
    if (marked_ & ~q_.all_mask())
      throw std::invalid_argument("marked-poset kernel: marked set out of range");
    int m = 0;
    for (int z = 0; z < n; ++z) {
      if (!(marked_ >> z & 1)) continue;
      if (q_.above[z] != 0)
        throw std::invalid_argument("marked-poset kernel: marked elements must be maximal");
      ++m;
    }
    if (static_cast<int>(mark_weights.size()) != m || static_cast<int>(mark_labels.size()) != m)
      throw std::invalid_argument("marked-poset kernel: need one weight and one label law per mark");
    qw_.assign(n, Rational(0));
    rho_.assign(n, LabelDistribution());
    Rational total(0);
    int at = 0;
    for (int z = 0; z < n; ++z) {
      if (!(marked_ >> z & 1)) continue;
      if (mark_weights[at] <= 0)
        throw std::invalid_argument("marked-poset kernel: mark weights must be positive");
      qw_[z] = mark_weights[at];
      rho_[z] = mark_labels[at];
      total += mark_weights[at];
      ++at;
    }
    if (total > 1)
      throw std::invalid_argument("marked-poset kernel: mark weights must sum to at most 1");
    if (base_weights.empty()) {
      base_.assign(n, Rational(1));
    } else {
      if (static_cast<int>(base_weights.size()) != n)
        throw std::invalid_argument("marked-poset kernel: need one base weight per element");
      base_ = std::move(base_weights);
      for (int x = 0; x < n; ++x) {
        if (base_[x] < 0)
          throw std::invalid_argument("marked-poset kernel: base weights must be non-negative");
        if (!(marked_ >> x & 1) && base_[x] == 0)
          throw std::invalid_argument("marked-poset kernel: unmarked elements need positive weight");
      }
    }
  }

  std::string name() const override { return "marked_poset"; }

  Json config_json() const override {
    Json j{{"kind", "marked_poset"}, {"order", poset_to_text(q_)}};
    Json zs = Json::array(), ws = Json::array(), rs = Json::array(), bs = Json::array();
    for (int z = 0; z < q_.n; ++z) {
      if (marked_ >> z & 1) {
        zs.push_back(z + 1);
        ws.push_back(rational_str(qw_[z]));
        rs.push_back(rho_[z].to_json());
      }
    }
    for (int x = 0; x < q_.n; ++x) bs.push_back(rational_str(base_[x]));
    j["marked"] = zs;
    j["q"] = ws;
    j["rho"] = rs;
    j["base"] = bs;
    return j;
  }

  bool is_atomic() const override { return false; }

  struct MpState final : KernelState {
    Mask placed = 0;             // unmarked elements already generated
    std::vector<int> pos_of;     // element -> position, or -1
    int total = 0;
    std::unique_ptr<KernelState> clone() const override {
      return std::make_unique<MpState>(*this);
    }
    int count() const override { return total; }
  };

  std::unique_ptr<KernelState> initial_state() const override {
    auto st = std::make_unique<MpState>();
    st->pos_of.assign(q_.n, -1);
    return st;
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<MpState&>(state);
    // enabled marks, then available unmarked elements
    std::vector<int> opts;
    std::vector<Rational> w;
    Rational residual(1);
    for (int z = 0; z < q_.n; ++z) {
      if (!(marked_ >> z & 1)) continue;
      if (q_.below[z] & ~s.placed) continue;  // not yet enabled
      opts.push_back(z);
      w.push_back(qw_[z]);
      residual -= qw_[z];
    }
    if (residual > 0) {
      std::vector<int> avail;
      Rational bsum(0);
      for (int x = 0; x < q_.n; ++x) {
        if ((marked_ >> x & 1) || (s.placed >> x & 1)) continue;
        if (q_.below[x] & ~s.placed) continue;
        avail.push_back(x);
        bsum += base_[x];
      }
      if (avail.empty())
        throw std::runtime_error(
            "marked-poset kernel: per-step law is not total (leftover probability with nothing "
            "unmarked to generate)");
      for (int x : avail) {
        opts.push_back(q_.n + x);
        w.push_back(residual * base_[x] / bsum);
      }
    }
    std::size_t pick = weighted_choice_rational(rng, w);
    int code = opts[pick];
    StepRecord rec;
    if (code < q_.n) {
      int z = code;
      rec.element_id = -2 - z;  // mark ids are encoded as -(z+2)
      rec.delta = placed_positions(s, q_.below[z]);
      rec.label = rho_[z].sample(rng);
    } else {
      int x = code - q_.n;
      rec.element_id = x;
      rec.delta = placed_positions(s, q_.below[x]);
      rec.label = element_label(x);
      s.placed |= Mask(1) << x;
      s.pos_of[x] = s.total;
    }
    ++s.total;
    return rec;
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    if (upto < 0 || upto > omega.size())
      throw std::invalid_argument("state_from_prefix: length out of range");
    auto st = std::make_unique<MpState>();
    st->pos_of.assign(q_.n, -1);
    for (int j = 0; j < upto; ++j) {
      int found = -1;
      for (int x = 0; x < q_.n; ++x) {
        if ((marked_ >> x & 1) || (st->placed >> x & 1)) continue;
        if (omega.labels[j] == element_label(x)) {
          found = x;
          break;
        }
      }
      if (found >= 0 && omega.delta[j] == placed_positions(*st, q_.below[found])) {
        st->placed |= Mask(1) << found;
        st->pos_of[found] = j;
      } else {
        bool mark_ok = false;
        for (int z = 0; z < q_.n && !mark_ok; ++z) {
          if (!(marked_ >> z & 1)) continue;
          if (q_.below[z] & ~st->placed) continue;
          mark_ok = omega.delta[j] == placed_positions(*st, q_.below[z]);
        }
        if (!mark_ok)
          throw std::invalid_argument("history element matches neither an unmarked element nor a mark");
      }
      ++st->total;
    }
    return st;
  }

  std::vector<double> persistent_labels(int horizon) const override {
    std::vector<double> out;
    for (int x = 0; x < q_.n && static_cast<int>(out.size()) < horizon; ++x)
      if (!(marked_ >> x & 1)) out.push_back(element_label(x));
    return out;
  }

 private:
  static constexpr std::uint64_t kSalt = 0xbead5eedc0ffee11ULL;

  double element_label(int x) const {
    return q_.has_labels() ? q_.labels[x] : hash_label(kSalt, static_cast<std::uint64_t>(x));
  }

  std::vector<int> placed_positions(const MpState& s, Mask elems) const {
    std::vector<int> out;
    for (Mask m = elems; m; m &= m - 1) {
      int x = lowest_bit(m);
      if (s.pos_of[x] < 0) throw std::logic_error("mark enabled before its down-set was generated");
      out.push_back(s.pos_of[x]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  FinitePoset q_;
  Mask marked_;
  std::vector<Rational> qw_;
  std::vector<LabelDistribution> rho_;
  std::vector<Rational> base_;
};

// ---------------------------------------------------------------------------
// Uniform-subtree kernel

class LwKernel final : public GrowthKernel {
 public:
  LwKernel(int d, int max_size)
      : d_(d), cap_(max_size), tables_(std::make_shared<SubtreeTables>(d, max_size)) {}

  std::string name() const override { return "lw_subtree"; }
  Json config_json() const override {
    return Json{{"kind", "lw_subtree"}, {"d", d_}, {"max_size", cap_}};
  }
  bool is_atomic() const override { return true; }

  struct LwState final : KernelState {
    std::vector<int> nodes;                  // sorted heap ids
    std::unordered_map<int, int> node_pos;   // heap id -> position in history
    int layer_idx = 0;
    std::unique_ptr<KernelState> clone() const override {
      return std::make_unique<LwState>(*this);
    }
    int count() const override { return static_cast<int>(nodes.size()); }
  };

  std::unique_ptr<KernelState> initial_state() const override {
    return std::make_unique<LwState>();
  }

  StepRecord step(KernelState& state, Rng& rng) const override {
    auto& s = dynamic_cast<LwState&>(state);
    auto opts = step_distribution(s);
    std::vector<Rational> w;
    w.reserve(opts.size());
    for (const auto& o : opts) w.push_back(o.prob.a);  // probabilities are rational here
    std::size_t pick = opts.size() == 1 ? 0 : weighted_choice_rational(rng, w);
    advance_with(s, opts[pick]);
    return {opts[pick].element_id, opts[pick].delta, opts[pick].label};
  }

  std::vector<AtomicOption> step_distribution(const KernelState& state) const override {
    const auto& s = dynamic_cast<const LwState&>(state);
    int sz = s.count();
    if (sz >= cap_)
      throw std::runtime_error("subtree kernel: size cap " + std::to_string(cap_) + " exceeded");
    std::vector<AtomicOption> opts;
    if (sz == 0) {
      opts.push_back({0, {}, node_label(0), Golden(1)});
      return opts;
    }
    const auto& row = tables_->transition(sz).rows[s.layer_idx];
    const auto& next_layer = tables_->layer(sz + 1).trees;
    for (const auto& [j, prob] : row) {
      int added = added_node(s.nodes, next_layer[j]);
      AtomicOption o;
      o.element_id = added;
      o.delta = ancestor_positions(s, added);
      o.label = node_label(added);
      o.prob = Golden(prob);
      opts.push_back(std::move(o));
    }
    return opts;
  }

  void advance_with(KernelState& state, const AtomicOption& opt) const override {
    auto& s = dynamic_cast<LwState&>(state);
    int v = opt.element_id;
    int sz = s.count();
    if (sz == 0) {
      if (v != 0) throw std::invalid_argument("first subtree node must be the root");
    } else {
      int parent = (v - 1) / d_;
      if (v <= 0 || !std::binary_search(s.nodes.begin(), s.nodes.end(), parent) ||
          std::binary_search(s.nodes.begin(), s.nodes.end(), v))
        throw std::invalid_argument("added node does not extend the subtree");
    }
    s.node_pos[v] = sz;
    s.nodes.insert(std::upper_bound(s.nodes.begin(), s.nodes.end(), v), v);
    const auto& layer = tables_->layer(sz + 1).trees;
    auto it = std::lower_bound(layer.begin(), layer.end(), s.nodes);
    if (it == layer.end() || *it != s.nodes) throw std::logic_error("subtree missing from its layer");
    s.layer_idx = static_cast<int>(it - layer.begin());
  }

  std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega, int upto) const override {
    if (upto < 0 || upto > omega.size())
      throw std::invalid_argument("state_from_prefix: length out of range");
    if (upto > cap_) throw std::invalid_argument("history longer than the subtree size cap");
    auto st = std::make_unique<LwState>();
    for (int j = 0; j < upto; ++j) {
      int v = omega.element_ids[j];
      if (v < 0) {
        // recover the node id from its deterministic label
        v = -1;
        std::vector<int> cands;
        if (st->nodes.empty()) {
          cands.push_back(0);
        } else {
          for (int u : st->nodes)
            for (int c = d_ * u + 1; c <= d_ * u + d_; ++c)
              if (!std::binary_search(st->nodes.begin(), st->nodes.end(), c)) cands.push_back(c);
        }
        for (int c : cands)
          if (omega.labels[j] == node_label(c)) {
            v = c;
            break;
          }
        if (v < 0) throw std::invalid_argument("history labels do not match subtree nodes");
      }
      AtomicOption o;
      o.element_id = v;
      advance_with(*st, o);
      if (ancestor_positions(*st, v) != omega.delta[j])
        throw std::invalid_argument("history down-set disagrees with tree ancestry");
    }
    return st;
  }

  const SubtreeTables& tables() const { return *tables_; }

 private:
  static constexpr std::uint64_t kSalt = 0x7ee1f01dedbeefULL;

  double node_label(int v) const { return hash_label(kSalt, static_cast<std::uint64_t>(v)); }

  static int added_node(const std::vector<int>& from, const std::vector<int>& to) {
    for (int v : to)
      if (!std::binary_search(from.begin(), from.end(), v)) return v;
    throw std::logic_error("layers out of sync");
  }

  std::vector<int> ancestor_positions(const LwState& s, int v) const {
    std::vector<int> out;
    while (v > 0) {
      v = (v - 1) / d_;
      out.push_back(s.node_pos.at(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  int d_;
  int cap_;
  std::shared_ptr<SubtreeTables> tables_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Factories

std::unique_ptr<GrowthKernel> kernel_fixed(CausalSetGenerator model, SelectionRule rule,
                                           Rational param) {
  return std::make_unique<FixedPosetKernel>(std::move(model), rule, std::move(param));
}

std::unique_ptr<GrowthKernel> kernel_ladder_golden() {
  return kernel_fixed(CausalSetGenerator::ladder(), SelectionRule::golden);
}

std::unique_ptr<GrowthKernel> kernel_ladder_half() {
  return kernel_fixed(CausalSetGenerator::ladder(), SelectionRule::half);
}

std::unique_ptr<GrowthKernel> kernel_two_chains(const Rational& q) {
  return kernel_fixed(CausalSetGenerator::two_chains(), SelectionRule::chain_weight, q);
}

std::unique_ptr<GrowthKernel> kernel_polya_urn() {
  return kernel_fixed(CausalSetGenerator::two_chains(), SelectionRule::polya_urn);
}

std::unique_ptr<GrowthKernel> kernel_random_graph_order(const Rational& p) {
  return std::make_unique<RgoKernel>(p);
}

std::unique_ptr<GrowthKernel> kernel_csg(std::vector<Rational> t_weights) {
  return std::make_unique<CsgKernel>(std::move(t_weights));
}

std::unique_ptr<GrowthKernel> kernel_iid_antichain(LabelDistribution rho) {
  return std::make_unique<IidAntichainKernel>(std::move(rho));
}

std::unique_ptr<GrowthKernel> kernel_chain_with_marks(std::vector<Rational> p_levels,
                                                      Rational tail_ratio,
                                                      std::vector<LabelDistribution> marks) {
  return std::make_unique<ChainMarksKernel>(std::move(p_levels), std::move(tail_ratio),
                                            std::move(marks));
}

std::unique_ptr<GrowthKernel> kernel_marked_poset(FinitePoset q, Mask marked,
                                                  std::vector<Rational> mark_weights,
                                                  std::vector<LabelDistribution> mark_labels,
                                                  std::vector<Rational> base_weights) {
  return std::make_unique<MarkedKernel>(std::move(q), marked, std::move(mark_weights),
                                        std::move(mark_labels), std::move(base_weights));
}

std::unique_ptr<GrowthKernel> kernel_lw_subtree(int d, int max_size) {
  return std::make_unique<LwKernel>(d, max_size);
}

std::unique_ptr<GrowthKernel> make_kernel(const Json& config) {
  std::string kind = config.at("kind").get<std::string>();
  if (kind == "ladder_golden") return kernel_ladder_golden();
  if (kind == "ladder_half") return kernel_ladder_half();
  if (kind == "two_chains") return kernel_two_chains(rational_from_json(config.at("q")));
  if (kind == "polya_urn") return kernel_polya_urn();
  if (kind == "fixed") {
    auto model = parse_model_string(config.at("model").get<std::string>());
    std::string rule = config.at("rule").get<std::string>();
    if (rule == "golden") return kernel_fixed(std::move(model), SelectionRule::golden);
    if (rule == "half") return kernel_fixed(std::move(model), SelectionRule::half);
    if (rule == "chain_weight")
      return kernel_fixed(std::move(model), SelectionRule::chain_weight,
                          rational_from_json(config.at("q")));
    if (rule == "polya_urn") return kernel_fixed(std::move(model), SelectionRule::polya_urn);
    throw std::invalid_argument("unknown selection rule '" + rule + "'");
  }
  if (kind == "random_graph_order" || kind == "rgo")
    return kernel_random_graph_order(rational_from_json(config.at("p")));
  if (kind == "csg") {
    std::vector<Rational> t;
    for (const auto& w : config.at("t")) t.push_back(rational_from_json(w));
    return kernel_csg(std::move(t));
  }
  if (kind == "iid_antichain") {
    LabelDistribution rho = config.contains("rho") ? LabelDistribution::from_json(config.at("rho"))
                                                   : LabelDistribution();
    return kernel_iid_antichain(std::move(rho));
  }
  if (kind == "chain_with_marks") {
    std::vector<Rational> p;
    for (const auto& w : config.at("p")) p.push_back(rational_from_json(w));
    Rational tail = config.contains("tail_ratio") ? rational_from_json(config.at("tail_ratio"))
                                                  : Rational(1, 4);
    std::vector<LabelDistribution> marks;
    if (config.contains("marks"))
      for (const auto& m : config.at("marks")) marks.push_back(LabelDistribution::from_json(m));
    return kernel_chain_with_marks(std::move(p), std::move(tail), std::move(marks));
  }
  if (kind == "marked_poset") {
    FinitePoset q = parse_poset_text(config.at("order").get<std::string>());
    Mask marked = 0;
    for (const auto& z : config.at("marked")) {
      int v = z.get<int>();
      if (v < 1 || v > q.n) throw std::invalid_argument("marked element index out of range");
      marked |= Mask(1) << (v - 1);
    }
    std::vector<Rational> w;
    for (const auto& x : config.at("q")) w.push_back(rational_from_json(x));
    std::vector<LabelDistribution> rho;
    if (config.contains("rho"))
      for (const auto& r : config.at("rho")) rho.push_back(LabelDistribution::from_json(r));
    else
      rho.assign(w.size(), LabelDistribution());
    std::vector<Rational> base;
    if (config.contains("base"))
      for (const auto& b : config.at("base")) base.push_back(rational_from_json(b));
    return kernel_marked_poset(std::move(q), marked, std::move(w), std::move(rho), std::move(base));
  }
  if (kind == "lw_subtree")
    return kernel_lw_subtree(config.at("d").get<int>(), config.value("max_size", 8));
  throw std::invalid_argument("unknown kernel kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Driving

OmegaPrefix trajectory(const GrowthKernel& kernel, int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("trajectory: negative length");
  OmegaPrefix omega;
  omega.kernel_name = kernel.name();
  omega.seed = seed;
  Rng rng(seed);
  auto state = kernel.initial_state();
  std::unordered_set<double> seen;
  seen.reserve(static_cast<std::size_t>(n) * 2);
  constexpr int kMaxRedraws = 1000;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      std::unique_ptr<KernelState> backup;
      if (!kernel.is_atomic()) backup = state->clone();
      StepRecord rec = kernel.step(*state, rng);
      if (seen.insert(rec.label).second) {
        omega.append(rec.label, std::move(rec.delta), rec.element_id);
        placed = true;
      } else {
        if (kernel.is_atomic())
          throw std::logic_error(kernel.name() + ": deterministic label collision");
        state = std::move(backup);
        ++omega.label_collisions;
      }
    }
    if (!placed) throw std::logic_error(kernel.name() + ": persistent label collision");
  }
  return omega;
}

OmegaPrefix step_once(const GrowthKernel& kernel, const OmegaPrefix& omega, Rng& rng) {
  auto state = kernel.state_from_prefix(omega, omega.size());
  OmegaPrefix out = omega;
  std::unordered_set<double> seen(omega.labels.begin(), omega.labels.end());
  constexpr int kMaxRedraws = 1000;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    std::unique_ptr<KernelState> backup;
    if (!kernel.is_atomic()) backup = state->clone();
    StepRecord rec = kernel.step(*state, rng);
    if (seen.count(rec.label) == 0) {
      out.append(rec.label, std::move(rec.delta), rec.element_id);
      return out;
    }
    if (kernel.is_atomic())
      throw std::logic_error(kernel.name() + ": deterministic label collision");
    state = std::move(backup);
    ++out.label_collisions;
  }
  throw std::logic_error(kernel.name() + ": persistent label collision");
}

namespace {

template <typename Matcher>
Golden stem_probability_walk(const GrowthKernel& kernel, int len, Matcher matches) {
  auto state = kernel.initial_state();
  Golden prob(1);
  for (int j = 0; j < len; ++j) {
    auto opts = kernel.step_distribution(*state);
    bool found = false;
    for (const auto& o : opts) {
      if (matches(j, o)) {
        prob = prob * o.prob;
        kernel.advance_with(*state, o);
        found = true;
        break;
      }
    }
    if (!found) return Golden(0);
  }
  return prob;
}

}  // namespace

Golden exact_stem_probability(const GrowthKernel& kernel, const std::vector<int>& element_ids) {
  return stem_probability_walk(kernel, static_cast<int>(element_ids.size()),
                               [&](int j, const AtomicOption& o) {
                                 return o.element_id == element_ids[j];
                               });
}

Golden exact_stem_probability(const GrowthKernel& kernel, const OmegaPrefix& omega) {
  return stem_probability_walk(kernel, omega.size(), [&](int j, const AtomicOption& o) {
    return o.label == omega.labels[j] && o.delta == omega.delta[j];
  });
}

std::vector<StemEntry> enumerate_stems(const GrowthKernel& kernel, int depth, std::size_t cap) {
  if (!kernel.is_atomic())
    throw std::logic_error(kernel.name() + ": stem enumeration needs an atomic kernel");
  std::vector<StemEntry> out;
  OmegaPrefix omega;
  omega.kernel_name = kernel.name();
  // depth-first over the option tree, deterministic order
  std::function<void(KernelState&, const Golden&, int)> dfs = [&](KernelState& state,
                                                                  const Golden& prob, int d) {
    if (d == depth) {
      if (out.size() >= cap)
        throw std::runtime_error("stem enumeration exceeds cap of " + std::to_string(cap));
      StemEntry e;
      e.ids = omega.element_ids;
      e.omega = omega;
      e.prob = prob;
      out.push_back(std::move(e));
      return;
    }
    for (const auto& o : kernel.step_distribution(state)) {
      if (o.prob.is_zero()) continue;
      auto child = state.clone();
      kernel.advance_with(*child, o);
      omega.append(o.label, o.delta, o.element_id);
      dfs(*child, prob * o.prob, d + 1);
      omega.labels.pop_back();
      omega.delta.pop_back();
      omega.element_ids.pop_back();
    }
  };
  auto root = kernel.initial_state();
  dfs(*root, Golden(1), 0);
  return out;
}

Rational rgo_order_probability(const FinitePoset& order, const Rational& p) {
  if (!order.is_standard_suborder())
    throw std::invalid_argument("order must be a standard suborder");
  if (p < 0 || p > 1) throw std::invalid_argument("edge probability must lie in [0,1]");
  CoverInfo info = covering_pairs(order);
  return rational_pow(p, info.c) * rational_pow(1 - p, info.b);
}

std::vector<std::pair<Mask, Rational>> csg_step_distribution(const std::vector<Rational>& t,
                                                             const FinitePoset& state_order) {
  if (t.empty()) throw std::invalid_argument("empty weight sequence");
  auto downsets = enumerate_down_sets(state_order);
  int tmax = static_cast<int>(t.size()) - 1;
  std::vector<std::pair<Mask, Rational>> out;
  Rational total(0);
  for (Mask d : downsets) {
    int sz = popcount(d);
    int m = 0;
    for (Mask x = d; x; x &= x - 1)
      if (!(state_order.above[lowest_bit(x)] & d)) ++m;
    Rational w(0);
    for (int s = m; s <= std::min(sz, tmax); ++s)
      w += Rational(binomial(sz - m, s - m)) * t[s];
    total += w;
    out.emplace_back(d, w);
  }
  if (total == 0)
    throw std::runtime_error("all subset weights vanish at this state");
  for (auto& [d, w] : out) w /= total;
  return out;
}

}  // namespace causetlab

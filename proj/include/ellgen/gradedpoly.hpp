#pragma once

// Graded polynomial ring with a hard total-degree cap.
//
// A GeneratorSet fixes the generators (name + positive even degree) and the
// cap; every monomial whose total degree exceeds the cap is silently dropped,
// which makes the ring finite-dimensional and every positive-degree element
// nilpotent.  Monomials are interned into dense indices so polynomial terms
// are keyed by a single integer instead of an exponent vector.
//
// Constants get special treatment: a GradedPoly holding only a degree-0 term
// may carry a null GeneratorSet.  Such "universal" constants act in any ring
// (they adopt the other operand's ring on contact), which lets ring_traits
// provide zero()/one() without a ring context -- essential when GradedPoly
// sits at the bottom of a tower of series and jet rings.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ellgen/rational.hpp"
#include "ellgen/ring.hpp"

namespace ellgen {

using Mono = std::vector<int>;  // exponent vector, one slot per generator

struct MonoHash {
  size_t operator()(const Mono& m) const {
    size_t h = 1469598103934665603ull;
    for (int e : m) {
      h ^= static_cast<size_t>(e) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

class GeneratorSet {
 public:
  struct Generator {
    std::string name;
    int degree;
  };

  static constexpr uint32_t DROPPED = UINT32_MAX;

  static std::shared_ptr<const GeneratorSet> make(std::vector<Generator> gens,
                                                  int degree_cap) {
    for (const auto& g : gens)
      if (g.degree <= 0) throw std::invalid_argument("generator degree must be positive");
    return std::shared_ptr<const GeneratorSet>(new GeneratorSet(std::move(gens), degree_cap));
  }

  const std::vector<Generator>& generators() const { return gens_; }
  int degree_cap() const { return cap_; }

  int generator_index(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("no generator named " + name);
  }

  // Find-or-create the dense index of an exponent vector.  Returns DROPPED
  // when the total degree exceeds the cap.
  uint32_t intern(const Mono& exps) const {
    if (exps.size() != gens_.size())
      throw std::invalid_argument("exponent vector has wrong length");
    int deg = 0;
    for (size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] < 0) throw std::invalid_argument("negative exponent");
      deg += exps[i] * gens_[i].degree;
    }
    if (deg > cap_) return DROPPED;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_of_.find(exps);
    if (it != index_of_.end()) return it->second;
    uint32_t idx = static_cast<uint32_t>(monos_.size());
    monos_.push_back({exps, deg});
    index_of_.emplace(exps, idx);
    return idx;
  }

  uint32_t mul_index(uint32_t a, uint32_t b) const {
    std::unique_lock<std::mutex> lock(mu_);
    const MonoData& ma = monos_[a];
    const MonoData& mb = monos_[b];
    if (ma.degree + mb.degree > cap_) return DROPPED;
    Mono sum(gens_.size());
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = ma.exps[i] + mb.exps[i];
    auto it = index_of_.find(sum);
    if (it != index_of_.end()) return it->second;
    uint32_t idx = static_cast<uint32_t>(monos_.size());
    monos_.push_back({std::move(sum), ma.degree + mb.degree});
    index_of_.emplace(monos_.back().exps, idx);
    return idx;
  }

  Mono exponents(uint32_t idx) const {  // by value: registry may grow concurrently
    std::lock_guard<std::mutex> lock(mu_);
    return monos_[idx].exps;
  }
  int degree(uint32_t idx) const {
    std::lock_guard<std::mutex> lock(mu_);
    return monos_[idx].degree;
  }

 private:
  GeneratorSet(std::vector<Generator> gens, int cap)
      : gens_(std::move(gens)), cap_(cap) {
    Mono unit(gens_.size(), 0);
    monos_.push_back({std::move(unit), 0});
    index_of_.emplace(monos_[0].exps, 0);  // the empty monomial is always index 0
  }

  struct MonoData {
    Mono exps;
    int degree;
  };

  std::vector<Generator> gens_;
  int cap_;
  mutable std::mutex mu_;
  mutable std::vector<MonoData> monos_;
  mutable std::unordered_map<Mono, uint32_t, MonoHash> index_of_;
};

using RingPtr = std::shared_ptr<const GeneratorSet>;

class GradedPoly {
 public:
  GradedPoly() = default;  // universal zero (null ring)

  static GradedPoly constant(Rational c) {
    GradedPoly p;
    if (sgn(c.get_num()) != 0) p.terms_[0] = std::move(c);
    return p;
  }

  static GradedPoly constant_in(RingPtr ring, Rational c) {
    GradedPoly p = constant(std::move(c));
    p.ring_ = std::move(ring);
    return p;
  }

  static GradedPoly generator(const RingPtr& ring, int i) {
    Mono m(ring->generators().size(), 0);
    m[i] = 1;
    GradedPoly p;
    p.ring_ = ring;
    uint32_t idx = ring->intern(m);
    if (idx != GeneratorSet::DROPPED) p.terms_[idx] = 1;
    return p;
  }

  static GradedPoly generator(const RingPtr& ring, const std::string& name) {
    return generator(ring, ring->generator_index(name));
  }

  static GradedPoly monomial(const RingPtr& ring, const Mono& exps, Rational c) {
    GradedPoly p;
    p.ring_ = ring;
    uint32_t idx = ring->intern(exps);
    if (idx != GeneratorSet::DROPPED && sgn(c.get_num()) != 0) p.terms_[idx] = std::move(c);
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  bool is_zero_poly() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  Rational constant_part() const {
    auto it = terms_.find(0);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // Coefficient of an explicit exponent vector (0 if absent or dropped).
  Rational coeff(const Mono& exps) const {
    if (!ring_) {
      for (int e : exps)
        if (e != 0) return Rational(0);
      return constant_part();
    }
    uint32_t idx = ring_->intern(exps);
    if (idx == GeneratorSet::DROPPED) return Rational(0);
    auto it = terms_.find(idx);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // Largest degree with a nonzero term; -1 for the zero polynomial.
  int top_degree() const {
    int d = -1;
    for (const auto& [idx, c] : terms_) d = std::max(d, idx == 0 ? 0 : ring_->degree(idx));
    return d;
  }

  GradedPoly degree_component(int k) const {
    GradedPoly out;
    out.ring_ = ring_;
    for (const auto& [idx, c] : terms_) {
      int d = (idx == 0) ? 0 : ring_->degree(idx);
      if (d == k) out.terms_.emplace(idx, c);
    }
    return out;
  }

  friend GradedPoly operator+(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly out = a;
    out.adopt(b.ring_);
    for (const auto& [idx, c] : b.terms_) out.add_term(idx, c);
    return out;
  }

  friend GradedPoly operator-(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly out = a;
    out.adopt(b.ring_);
    for (const auto& [idx, c] : b.terms_) out.add_term(idx, Rational(-c));
    return out;
  }

  GradedPoly operator-() const {
    GradedPoly out = *this;
    for (auto& [idx, c] : out.terms_) c = -c;
    return out;
  }

  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly out;
    out.ring_ = a.ring_ ? a.ring_ : b.ring_;
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_)
      throw std::logic_error("product of polynomials over different generator sets");
    if (!out.ring_) {  // two universal constants
      if (!a.terms_.empty() && !b.terms_.empty()) {
        Rational c = a.constant_part() * b.constant_part();
        if (sgn(c.get_num()) != 0) out.terms_[0] = std::move(c);
      }
      return out;
    }
    const GeneratorSet& R = *out.ring_;
    for (const auto& [ia, ca] : a.terms_)
      for (const auto& [ib, cb] : b.terms_) {
        uint32_t k = R.mul_index(ia, ib);
        if (k != GeneratorSet::DROPPED) out.add_term(k, Rational(ca * cb));
      }
    return out;
  }

  friend bool operator==(const GradedPoly& a, const GradedPoly& b) {
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_) return false;
    if (!a.ring_ || !b.ring_) {
      // at least one universal constant: compare as constants
      if (a.ring_ && a.top_degree() > 0) return false;
      if (b.ring_ && b.top_degree() > 0) return false;
      return a.constant_part() == b.constant_part();
    }
    return a.terms_ == b.terms_;
  }

  GradedPoly scaled(const Rational& s) const {
    GradedPoly out;
    out.ring_ = ring_;
    if (sgn(s.get_num()) == 0) return out;
    for (const auto& [idx, c] : terms_) out.terms_.emplace(idx, Rational(c * s));
    return out;
  }

  // Terms in a canonical order (degree, then exponent vector), for printing,
  // serialization, and symmetric-function extraction.
  struct Term {
    Mono exps;
    int degree;
    Rational coeff;
  };
  std::vector<Term> sorted_terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [idx, c] : terms_) {
      if (!ring_) {
        out.push_back({Mono{}, 0, c});
      } else {
        out.push_back({ring_->exponents(idx), idx == 0 ? 0 : ring_->degree(idx), c});
      }
    }
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) {
      if (x.degree != y.degree) return x.degree < y.degree;
      return x.exps < y.exps;
    });
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : sorted_terms()) {
      if (!first) os << " + ";
      first = false;
      bool has_var = false;
      for (int e : t.exps) has_var |= (e != 0);
      if (!has_var) {
        os << rat_str(t.coeff);
        continue;
      }
      if (t.coeff != 1) os << rat_str(t.coeff) << "*";
      bool first_var = true;
      for (size_t i = 0; i < t.exps.size(); ++i) {
        if (t.exps[i] == 0) continue;
        if (!first_var) os << "*";
        first_var = false;
        os << ring_->generators()[i].name;
        if (t.exps[i] > 1) os << "^" << t.exps[i];
      }
    }
    return os.str();
  }

 private:
  void adopt(const RingPtr& other) {
    if (!other) return;
    if (!ring_) {
      ring_ = other;
      return;
    }
    if (ring_ != other)
      throw std::logic_error("sum of polynomials over different generator sets");
  }

  void add_term(uint32_t idx, Rational c) {
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
      if (sgn(c.get_num()) != 0) terms_.emplace(idx, std::move(c));
      return;
    }
    it->second += c;
    if (sgn(it->second.get_num()) == 0) terms_.erase(it);
  }

  RingPtr ring_;
  std::map<uint32_t, Rational> terms_;
};

template <>
struct ring_traits<GradedPoly> {
  static GradedPoly zero() { return GradedPoly(); }
  static GradedPoly one() { return GradedPoly::constant(1); }
  static bool is_zero(const GradedPoly& p) { return p.is_zero_poly(); }
  static GradedPoly from_rational(const Rational& c) { return GradedPoly::constant(c); }
  static GradedPoly scale(const GradedPoly& p, const Rational& s) { return p.scaled(s); }

  // Invertible iff the constant part is: positive-degree parts are nilpotent
  // thanks to the cap, so a geometric series terminates.
  static GradedPoly invert(const GradedPoly& p) {
    Rational c0 = p.constant_part();
    if (sgn(c0.get_num()) == 0)
      throw std::domain_error("graded polynomial with zero constant part is not invertible");
    Rational inv0 = 1 / c0;
    GradedPoly n = scale(p, inv0);  // 1 + h with h nilpotent
    GradedPoly h = n - one();
    GradedPoly acc = one();
    GradedPoly power = one();
    int guard = p.ring() ? p.ring()->degree_cap() + 2 : 2;
    for (int k = 1; k <= guard; ++k) {
      power = power * h;
      if (power.is_zero_poly()) break;
      if (k == guard)
        throw std::domain_error("graded inverse failed to terminate (non-nilpotent tail)");
      acc = (k % 2) ? acc - power : acc + power;
    }
    return scale(acc, inv0);
  }

  static std::string str(const GradedPoly& p) { return p.str(); }
};

}  // namespace ellgen

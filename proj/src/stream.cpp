#include "mhs/stream.hpp"

#include <algorithm>
#include <string>

namespace mhs {

namespace {

mpz_class mpz_from_u64(u64 value) {
  return mpz_class(static_cast<unsigned long>(value));
}

mpz_class mpz_pow(u64 base, unsigned exp) {
  mpz_class out;
  mpz_class b = mpz_from_u64(base);
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), exp);
  return out;
}

}  // namespace

ScaledStream::FastCore ScaledStream::make_fast(u64 p, unsigned K) {
  FastCore core;
  core.modulus = PrimePowerModulus::make(p, K).value;
  core.ppow.resize(K + 1);
  core.ppow[0] = 1;
  for (unsigned e = 1; e <= K; ++e) core.ppow[e] = core.ppow[e - 1] * p;
  return core;
}

ScaledStream::WideCore ScaledStream::make_wide(u64 p, unsigned K) {
  WideCore core;
  core.modulus = mpz_pow(p, K);
  core.ppow.resize(K + 1);
  core.ppow[0] = 1;
  for (unsigned e = 1; e <= K; ++e) core.ppow[e] = core.ppow[e - 1] * static_cast<unsigned long>(p);
  return core;
}

ScaledStream::ScaledStream(Composition c, u64 p, unsigned t, unsigned K, WidePolicy wide)
    : c_(std::move(c)), p_(p), t_(t), K_(K), policy_(wide) {
  if (p < 2 || !is_prime(p)) throw Error("stream: p must be prime");
  if (K == 0) throw Error("stream: modulus exponent must be positive");
  n_ = c_.depth() - 1;
  if (!checked_pow(p, t + 1, segment_end_)) segment_end_ = UINT64_MAX;
  u64 fits = 0;
  if (checked_pow(p, K, fits)) {
    FastCore core = make_fast(p, K);
    core.psum.assign(c_.depth() + 1, 0);
    core.psum[0] = 1 % core.modulus;
    core_ = std::move(core);
  } else if (policy_ == WidePolicy::Auto) {
    WideCore core = make_wide(p, K);
    core.psum.assign(c_.depth() + 1, mpz_class(0));
    core.psum[0] = 1;
    core_ = std::move(core);
  } else {
    throw ModulusTooLarge("stream: " + std::to_string(p) + "^" + std::to_string(K) +
                          " exceeds the 64-bit backend");
  }
}

ScaledStream ScaledStream::at_segment_start(Composition c, u64 p, unsigned t, unsigned K,
                                            WidePolicy wide) {
  ScaledStream stream(std::move(c), p, t, K, wide);
  u64 first = 1;
  if (!checked_pow(p, t, first)) first = UINT64_MAX;
  first = std::max<u64>(first, stream.depth());
  while (stream.n_ + 1 < first) stream.advance();
  return stream;
}

bool ScaledStream::at_segment_end() const { return n_ + 1 >= segment_end_; }

template <class Core>
void ScaledStream::advance_core(Core& core) {
  const unsigned d = c_.depth();
  const u64 next = n_ + 1;
  for (unsigned i = 1; i <= d; ++i) {
    const u64 j = next - d + i;
    const SplitValuation sv = padic_val(j, p_);
    const unsigned shift = (t_ - sv.v) * c_.part(i);
    if (shift >= K_) continue;
    if constexpr (std::is_same_v<Core, FastCore>) {
      const u64 m = core.modulus;
      u64 term = mulmod(core.ppow[shift], core.psum[i - 1], m);
      term = mulmod(term, invmod(powmod(sv.unit, c_.part(i), m), m), m);
      core.psum[i] = (core.psum[i] + term) % m;
    } else {
      mpz_class upow;
      mpz_class u = mpz_from_u64(sv.unit);
      mpz_class e = mpz_from_u64(c_.part(i));
      mpz_powm(upow.get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(), core.modulus.get_mpz_t());
      mpz_class uinv;
      if (mpz_invert(uinv.get_mpz_t(), upow.get_mpz_t(), core.modulus.get_mpz_t()) == 0) {
        throw NotInvertible("stream: unit part not invertible");
      }
      mpz_class term = core.ppow[shift] * core.psum[i - 1] % core.modulus;
      term = term * uinv % core.modulus;
      core.psum[i] = (core.psum[i] + term) % core.modulus;
    }
  }
  n_ = next;
}

void ScaledStream::advance() {
  if (at_segment_end()) {
    throw SegmentExhausted("stream: segment " + std::to_string(t_) + " of p=" + std::to_string(p_) +
                           " ends before index " + std::to_string(n_ + 1));
  }
  std::visit([this](auto& core) { advance_core(core); }, core_);
}

void ScaledStream::enter_next_segment(unsigned K_next) {
  if (K_next < K_) throw Error("stream: modulus exponent cannot shrink across segments");
  t_ += 1;
  K_ = K_next;
  if (!checked_pow(p_, t_ + 1, segment_end_)) segment_end_ = UINT64_MAX;

  u64 fits = 0;
  const bool fast_ok = checked_pow(p_, K_next, fits);
  if (std::holds_alternative<FastCore>(core_) && !fast_ok) {
    if (policy_ == WidePolicy::FastOnly) {
      throw ModulusTooLarge("stream: segment " + std::to_string(t_) + " modulus " +
                            std::to_string(p_) + "^" + std::to_string(K_next) +
                            " exceeds the 64-bit backend");
    }
    // Migrate the carried residues to the wide backend.
    FastCore& old = std::get<FastCore>(core_);
    WideCore core = make_wide(p_, K_next);
    core.psum.reserve(old.psum.size());
    for (u64 value : old.psum) core.psum.push_back(mpz_from_u64(value));
    core_ = std::move(core);
  } else if (std::holds_alternative<FastCore>(core_)) {
    FastCore& core = std::get<FastCore>(core_);
    FastCore fresh = make_fast(p_, K_next);
    fresh.psum = std::move(core.psum);
    core_ = std::move(fresh);
  } else {
    WideCore& core = std::get<WideCore>(core_);
    core.modulus = mpz_pow(p_, K_next);
    core.ppow.resize(K_next + 1);
    for (unsigned e = 1; e <= K_next; ++e) {
      core.ppow[e] = core.ppow[e - 1] * static_cast<unsigned long>(p_);
    }
  }

  // Rescale: the scaling exponent of prefix i grows by its weight w_i.
  const unsigned d = c_.depth();
  std::visit(
      [&](auto& core) {
        using CoreT = std::decay_t<decltype(core)>;
        for (unsigned i = 1; i <= d; ++i) {
          const unsigned w = c_.prefix_weight(i);
          if constexpr (std::is_same_v<CoreT, FastCore>) {
            core.psum[i] = mulmod(core.psum[i], powmod(p_, w, core.modulus), core.modulus);
          } else {
            if (w >= K_) {
              core.psum[i] = 0;
            } else {
              core.psum[i] = core.psum[i] * core.ppow[w] % core.modulus;
            }
          }
        }
      },
      core_);
}

bool ScaledStream::wide() const { return std::holds_alternative<WideCore>(core_); }

bool ScaledStream::divisible(unsigned i, unsigned e) const {
  if (e > K_) throw Error("stream: divisibility exponent exceeds modulus exponent");
  return std::visit(
      [&](const auto& core) {
        using CoreT = std::decay_t<decltype(core)>;
        if constexpr (std::is_same_v<CoreT, FastCore>) {
          return core.psum[i] % core.ppow[e] == 0;
        } else {
          return mpz_divisible_p(core.psum[i].get_mpz_t(), core.ppow[e].get_mpz_t()) != 0;
        }
      },
      core_);
}

unsigned ScaledStream::p_exponent(unsigned i) const {
  return std::visit(
      [&](const auto& core) -> unsigned {
        using CoreT = std::decay_t<decltype(core)>;
        if constexpr (std::is_same_v<CoreT, FastCore>) {
          if (core.psum[i] == 0) return K_;
          return padic_val(core.psum[i], p_).v;
        } else {
          if (core.psum[i] == 0) return K_;
          return static_cast<unsigned>(padic_val(core.psum[i], p_).first);
        }
      },
      core_);
}

mpz_class ScaledStream::residue(unsigned i) const {
  return std::visit(
      [&](const auto& core) -> mpz_class {
        using CoreT = std::decay_t<decltype(core)>;
        if constexpr (std::is_same_v<CoreT, FastCore>) {
          return mpz_from_u64(core.psum[i]);
        } else {
          return core.psum[i];
        }
      },
      core_);
}

u64 ScaledStream::residue_u64(unsigned i) const {
  if (wide()) throw ModulusTooLarge("stream: residue does not fit 64 bits");
  return std::get<FastCore>(core_).psum[i];
}

StreamValuation stream_valuation(const Composition& c, u64 p, u64 n, unsigned cap,
                                 WidePolicy wide) {
  if (cap == 0) throw Error("stream_valuation: cap must be positive");
  // H vanishes for n < depth, so any finite cap is a valid lower bound.
  if (n < c.depth()) return StreamValuation{false, static_cast<long long>(cap)};
  // Locate the segment of n, then stream to n with enough guard digits that a
  // nonzero scaled residue pins the valuation below the cap.
  unsigned t = 0;
  u64 bound = p;  // p^(t+1)
  while (n >= bound) {
    ++t;
    u64 next = 0;
    if (!checked_pow(p, t + 1, next)) {
      bound = UINT64_MAX;
      break;
    }
    bound = next;
  }
  const unsigned K = t * c.weight() + cap;
  ScaledStream stream(c, p, t, K, wide);
  while (stream.n() < n) stream.advance();
  const unsigned e = stream.p_exponent(c.depth());
  const long long scale = static_cast<long long>(t) * c.weight();
  if (e >= K) return StreamValuation{false, static_cast<long long>(cap)};
  return StreamValuation{true, static_cast<long long>(e) - scale};
}

}  // namespace mhs

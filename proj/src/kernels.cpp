#include "lehmer/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lehmer/compensated.hpp"
#include "lehmer/detail/modmul.hpp"
#include "lehmer/error.hpp"

namespace lehmer::kernels {

namespace {

struct Scratch {
  std::vector<u64> units;
  std::vector<u64> prefix;
  std::vector<u64> inverses;
  std::vector<unsigned char> is_unit;
  std::vector<u64> residues;
};

// Visits every n in [lo, hi) coprime to q together with its residue vector
// (n^{k_0} mod q, ..., n^{k_{s-1}} mod q). Inverses for negative exponents
// come from one batch inversion per chunk.
template <class Mul>
class UnitEnumerator {
 public:
  UnitEnumerator(Mul mul, const Modulus& q, std::span<const i64> k) : mul_(mul), q_(q), k_(k) {
    for (i64 kj : k) {
      if (kj == 0) throw Error(Errc::ZeroExponent, "exponent vector contains a zero component");
      if (kj > kMaxExponent || kj < -kMaxExponent) {
        throw Error(Errc::ExponentOutOfRange, "exponent " + std::to_string(kj) + " exceeds cap");
      }
      abs_k_.push_back(static_cast<u64>(kj > 0 ? kj : -kj));
      need_inverse_ = need_inverse_ || kj < 0;
    }
  }

  u64 chunk_count() const { return (q_.q() - 1 + kChunk - 1) / kChunk; }

  template <class Visit>
  void run_chunk(u64 chunk, Scratch& s, Visit&& visit) const {
    const u64 q = q_.q();
    const u64 lo = 1 + chunk * kChunk;
    const u64 hi = std::min(q, lo + kChunk);
    collect_units(lo, hi, s);
    if (s.units.empty()) return;
    if (need_inverse_) invert_batch(s);

    const std::size_t dims = k_.size();
    s.residues.resize(dims);
    for (std::size_t i = 0; i < s.units.size(); ++i) {
      const u64 n = s.units[i];
      for (std::size_t j = 0; j < dims; ++j) {
        const u64 base = k_[j] > 0 ? n : s.inverses[i];
        s.residues[j] = abs_k_[j] == 1 ? base : detail::pow(mul_, base, abs_k_[j]);
      }
      visit(n, std::span<const u64>(s.residues));
    }
  }

  const Mul& mul() const { return mul_; }

 private:
  void collect_units(u64 lo, u64 hi, Scratch& s) const {
    s.units.clear();
    if (q_.is_prime()) {
      for (u64 n = lo; n < hi; ++n) s.units.push_back(n);
      return;
    }
    s.is_unit.assign(hi - lo, 1);
    for (const auto& f : q_.factors()) {
      const u64 p = f.prime;
      for (u64 x = (lo + p - 1) / p * p; x < hi; x += p) s.is_unit[x - lo] = 0;
    }
    for (u64 n = lo; n < hi; ++n) {
      if (s.is_unit[n - lo]) s.units.push_back(n);
    }
  }

  void invert_batch(Scratch& s) const {
    const std::size_t count = s.units.size();
    s.prefix.resize(count);
    s.inverses.resize(count);
    s.prefix[0] = s.units[0];
    for (std::size_t i = 1; i < count; ++i) s.prefix[i] = mul_.mul(s.prefix[i - 1], s.units[i]);
    u64 running = mod_inverse(static_cast<i64>(s.prefix[count - 1]), q_.q());
    for (std::size_t i = count - 1; i > 0; --i) {
      s.inverses[i] = mul_.mul(running, s.prefix[i - 1]);
      running = mul_.mul(running, s.units[i]);
    }
    s.inverses[0] = running;
  }

  Mul mul_;
  const Modulus& q_;
  std::span<const i64> k_;
  std::vector<u64> abs_k_;
  bool need_inverse_ = false;
};

void check_vectors(std::span<const i64> k, std::span<const u64> m, std::span<const u64> a) {
  if (k.empty() || k.size() != m.size() || k.size() != a.size()) {
    throw Error(Errc::InvalidArgument, "k, m and a must have the same nonzero length");
  }
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) throw Error(Errc::InvalidArgument, "m contains a zero component");
    if (a[j] >= m[j]) throw Error(Errc::InvalidArgument, "a_j must satisfy 0 <= a_j < m_j");
  }
}

u64 cell_count(std::span<const u64> m) {
  u64 cells = 1;
  for (u64 mj : m) {
    if (mj == 0) throw Error(Errc::InvalidArgument, "m contains a zero component");
    if (cells > kMaxCells / mj) {
      throw Error(Errc::RangeTooLarge, "cell table larger than " + std::to_string(kMaxCells));
    }
    cells *= mj;
  }
  return cells;
}

// Per-thread partial results, summed after the parallel region. Integer
// addition makes the outcome independent of scheduling.
template <class Enumerator, class Visit>
void run_integer_kernel(const Enumerator& en, int jobs, std::vector<std::vector<u64>>& per_thread,
                        std::size_t width, Visit visit) {
  const u64 chunks = en.chunk_count();
  const int threads = static_cast<int>(std::min<u64>(resolve_jobs(jobs), std::max<u64>(chunks, 1)));
  per_thread.assign(threads, std::vector<u64>(width, 0));
  if (threads == 1) {
    Scratch s;
    for (u64 c = 0; c < chunks; ++c) {
      en.run_chunk(c, s, [&](u64 n, std::span<const u64> r) { visit(per_thread[0], n, r); });
    }
    return;
  }
#pragma omp parallel num_threads(threads)
  {
    Scratch s;
    auto& mine = per_thread[omp_get_thread_num()];
#pragma omp for schedule(dynamic)
    for (u64 c = 0; c < chunks; ++c) {
      en.run_chunk(c, s, [&](u64 n, std::span<const u64> r) { visit(mine, n, r); });
    }
  }
}

u64 linear_form(const auto& mul, u64 q, std::span<const u64> lambda, std::span<const u64> r) {
  u64 z = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    z += mul.mul(lambda[j], r[j]);
    if (z >= q) z -= q;
  }
  return z;
}

}  // namespace

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : std::max(1, omp_get_max_threads()); }

std::complex<double> unit_phase(u64 z, u64 q) {
  if (z == 0) return {1.0, 0.0};
  const double signed_z = z > q / 2 ? -static_cast<double>(q - z) : static_cast<double>(z);
  const double theta = 2.0 * std::numbers::pi * signed_z / static_cast<double>(q);
  return {std::cos(theta), std::sin(theta)};
}

u64 count_matching(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                   std::span<const u64> a, int jobs) {
  check_vectors(k, m, a);
  return detail::with_mul(q.q(), [&](auto mul) {
    UnitEnumerator en(mul, q, k);
    std::vector<std::vector<u64>> partial;
    run_integer_kernel(en, jobs, partial, 1, [&](std::vector<u64>& acc, u64, std::span<const u64> r) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j] % m[j] != a[j]) return;
      }
      ++acc[0];
    });
    u64 total = 0;
    for (const auto& p : partial) total += p[0];
    return total;
  });
}

std::vector<u64> count_cells(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                             int jobs) {
  if (k.empty() || k.size() != m.size()) {
    throw Error(Errc::InvalidArgument, "k and m must have the same nonzero length");
  }
  const u64 cells = cell_count(m);
  return detail::with_mul(q.q(), [&](auto mul) {
    UnitEnumerator en(mul, q, k);
    std::vector<std::vector<u64>> partial;
    run_integer_kernel(en, jobs, partial, cells,
                       [&](std::vector<u64>& acc, u64, std::span<const u64> r) {
                         u64 index = 0;
                         for (std::size_t j = r.size(); j-- > 0;) index = index * m[j] + r[j] % m[j];
                         ++acc[index];
                       });
    std::vector<u64> total(cells, 0);
    for (const auto& p : partial) {
      for (u64 c = 0; c < cells; ++c) total[c] += p[c];
    }
    return total;
  });
}

SumResult exp_sum(const Modulus& q, std::span<const i64> k, std::span<const u64> lambda, int jobs) {
  if (k.empty() || k.size() != lambda.size()) {
    throw Error(Errc::InvalidArgument, "k and lambda must have the same nonzero length");
  }
  const u64 modulus = q.q();
  for (u64 l : lambda) {
    if (l >= modulus) throw Error(Errc::InvalidArgument, "lambda must be reduced to [0, q)");
  }
  const auto value = detail::with_mul(modulus, [&](auto mul) {
    UnitEnumerator en(mul, q, k);
    const u64 chunks = en.chunk_count();
    std::vector<CompensatedComplexSum> partial(chunks);
    auto body = [&](u64 c, Scratch& s) {
      auto& acc = partial[c];
      en.run_chunk(c, s, [&](u64, std::span<const u64> r) {
        const auto term = unit_phase(linear_form(mul, modulus, lambda, r), modulus);
        acc.add(term.real(), term.imag());
      });
    };
    const int threads = static_cast<int>(std::min<u64>(resolve_jobs(jobs), std::max<u64>(chunks, 1)));
    if (threads == 1) {
      Scratch s;
      for (u64 c = 0; c < chunks; ++c) body(c, s);
    } else {
#pragma omp parallel num_threads(threads)
      {
        Scratch s;
#pragma omp for schedule(dynamic)
        for (u64 c = 0; c < chunks; ++c) body(c, s);
      }
    }
    CompensatedComplexSum total;
    for (const auto& p : partial) total.merge(p);
    return total.value();
  });
  return {value, q.phi()};
}

namespace serial {

namespace {

template <class Visit>
void for_each_unit(const Modulus& q, std::span<const i64> k, Visit&& visit) {
  std::vector<u64> r(k.size());
  for (u64 n = 1; n < q.q(); ++n) {
    if (gcd(n, q.q()) != 1) continue;
    for (std::size_t j = 0; j < k.size(); ++j) r[j] = pow_mod_signed(static_cast<i64>(n), k[j], q.q());
    visit(std::span<const u64>(r));
  }
}

}  // namespace

u64 count_matching(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                   std::span<const u64> a) {
  check_vectors(k, m, a);
  u64 count = 0;
  for_each_unit(q, k, [&](std::span<const u64> r) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] % m[j] != a[j]) return;
    }
    ++count;
  });
  return count;
}

std::vector<u64> count_cells(const Modulus& q, std::span<const i64> k, std::span<const u64> m) {
  if (k.empty() || k.size() != m.size()) {
    throw Error(Errc::InvalidArgument, "k and m must have the same nonzero length");
  }
  std::vector<u64> cells(cell_count(m), 0);
  for_each_unit(q, k, [&](std::span<const u64> r) {
    u64 index = 0;
    for (std::size_t j = r.size(); j-- > 0;) index = index * m[j] + r[j] % m[j];
    ++cells[index];
  });
  return cells;
}

SumResult exp_sum(const Modulus& q, std::span<const i64> k, std::span<const u64> lambda) {
  if (k.empty() || k.size() != lambda.size()) {
    throw Error(Errc::InvalidArgument, "k and lambda must have the same nonzero length");
  }
  CompensatedComplexSum acc;
  for_each_unit(q, k, [&](std::span<const u64> r) {
    u64 z = 0;
    for (std::size_t j = 0; j < r.size(); ++j) z = (z + mul_mod(lambda[j], r[j], q.q())) % q.q();
    const auto term = unit_phase(z, q.q());
    acc.add(term.real(), term.imag());
  });
  return {acc.value(), q.phi()};
}

}  // namespace serial

}  // namespace lehmer::kernels

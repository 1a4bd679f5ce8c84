#pragma once

// Enumeration kernels over the reduced residue system U_q.
//
// The parallel kernels split [1, q) into fixed-size chunks, process chunks
// under OpenMP and combine per-chunk results in chunk order. Because the
// chunk boundaries do not depend on the thread count, every result is
// bit-identical for any `jobs`. The serial:: versions are the plain
// one-n-at-a-time reference used by tests and benchmarks.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lehmer/ntcore.hpp"

namespace lehmer::kernels {

/// Chunk width of the parallel kernels.
inline constexpr u64 kChunk = u64{1} << 14;

/// Largest cell table count_cells will allocate.
inline constexpr u64 kMaxCells = u64{1} << 24;

struct SumResult {
  std::complex<double> value;
  u64 terms = 0;
};

/// jobs <= 0 means the OpenMP default thread count.
int resolve_jobs(int jobs);

/// #{n in U_q : (n^{k_j} mod q) mod m_j == a_j for all j}.
u64 count_matching(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                   std::span<const u64> a, int jobs = 0);

/// Histogram over all residue vectors a in prod [0, m_j); entry index is
/// a_0 + m_0*(a_1 + m_1*(a_2 + ...)).
std::vector<u64> count_cells(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                             int jobs = 0);

/// sum over n in U_q of e_q(sum_j lambda_j n^{k_j}); lambda already reduced to [0, q).
SumResult exp_sum(const Modulus& q, std::span<const i64> k, std::span<const u64> lambda,
                  int jobs = 0);

namespace serial {

u64 count_matching(const Modulus& q, std::span<const i64> k, std::span<const u64> m,
                   std::span<const u64> a);

std::vector<u64> count_cells(const Modulus& q, std::span<const i64> k, std::span<const u64> m);

SumResult exp_sum(const Modulus& q, std::span<const i64> k, std::span<const u64> lambda);

}  // namespace serial

/// exp(2 pi i z / q) for a residue z in [0, q), evaluated at the symmetric
/// representative of z.
std::complex<double> unit_phase(u64 z, u64 q);

}  // namespace lehmer::kernels

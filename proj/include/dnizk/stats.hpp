#pragma once

#include <cstdint>
#include <span>

namespace dnizk::stats {

// Upper-tail probability of a chi-square variate with `dof` degrees of
// freedom; the p-value of an observed statistic.
double chi2_sf(double stat, double dof);

// One histogram against the flat distribution; dof = cells - 1.
double chi2_uniform_pvalue(std::span<const uint64_t> counts);

// Two histograms against each other; totals need not match.  Cells
// empty on both sides are skipped.
double chi2_two_sample_pvalue(std::span<const uint64_t> a,
                              std::span<const uint64_t> b);

// Total variation distance between the two empirical distributions.
double tv_distance(std::span<const uint64_t> a, std::span<const uint64_t> b);

}  // namespace dnizk::stats

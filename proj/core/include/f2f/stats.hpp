#pragma once

#include <span>

namespace f2f::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);

double circular_mean(std::span<const double> angles);
/// Mean resultant length R in [0, 1].
double resultant_length(std::span<const double> angles);
/// sqrt(-2 ln R)
double circular_std(std::span<const double> angles);

/// Rayleigh test of circular uniformity; returns the p-value.
double rayleigh_p(std::span<const double> angles);

/// Two-sample Kuiper test on the circle; returns the asymptotic p-value.
double kuiper_two_sample_p(std::span<const double> a, std::span<const double> b);

/// Two antipodal-seeded clusters: axis from the doubled-angle mean, each
/// sample assigned to the nearer pole, then per-cluster circular means.
struct TwoClusterFit {
    double center1 = 0.0;
    double center2 = 0.0;
    int count1 = 0;
    int count2 = 0;
    double separation = 0.0;  // angular distance between centers, in [0, pi]
    double spread1 = 0.0;     // circular std within each cluster
    double spread2 = 0.0;
};

TwoClusterFit two_cluster_fit(std::span<const double> angles);

/// Smallest absolute difference between two angles, in [0, pi].
double angular_distance(double a, double b);

}  // namespace f2f::stats

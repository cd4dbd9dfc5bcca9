#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace supnorm {

// Neumaier-compensated accumulator. Summation order is part of every caller's
// contract here: sums are bit-stable only if terms arrive in a fixed order.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Adaptive Simpson on [a,b] to absolute tolerance abs_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 60);

// Fixed composite Simpson with n panels (n is rounded up to even).
double integrate_simpson(const std::function<double(double)>& f, double a, double b, int n);

// 4-point Gauss-Legendre nodes/weights on [-1,1].
struct GaussLegendre4 {
    static constexpr double node[4] = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
    static constexpr double weight[4] = {0.3478548451374538, 0.6521451548625461,
                                         0.6521451548625461, 0.3478548451374538};
};

void set_thread_count(int n);
int thread_count();

// Fills values[i] = f(i) for i in [0,n), possibly in parallel. The result does
// not depend on the number of workers.
void parallel_fill(std::size_t n, const std::function<double(std::size_t)>& f,
                   std::vector<double>& values);

// parallel_fill followed by a compensated sum in index order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& f);

// Ordinary least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace supnorm

#pragma once

#include <memory>
#include <vector>

#include "rotlab/limit_law.hpp"

namespace rotlab {

// A distribution on the real line known through its CDF.
class Law {
 public:
  virtual ~Law() = default;

  virtual double cdf(double x) const = 0;       // P[X <= x]
  virtual double cdf_left(double x) const = 0;  // P[X < x]
  virtual double lower() const = 0;             // ess inf
  virtual double upper() const = 0;             // ess sup
  // Points where the CDF is not smooth.
  virtual std::vector<double> breakpoints() const { return {lower(), upper()}; }

  // inf { x : F(x) >= p }.
  virtual double quantile(double p) const;
  double median() const { return quantile(0.5); }
  double iqr() const { return quantile(0.75) - quantile(0.25); }
};

class UniformLaw : public Law {
 public:
  UniformLaw(double a, double b);

  double cdf(double x) const override;
  double cdf_left(double x) const override { return cdf(x); }
  double lower() const override { return a_; }
  double upper() const override { return b_; }
  double quantile(double p) const override;

 private:
  double a_;
  double b_;
};

// Law of scale * g(U_c) + shift, scale > 0.
class GLaw : public Law {
 public:
  explicit GLaw(const LimitLawParams& params, double scale = 1.0, double shift = 0.0);
  GLaw(PiecewiseQuadratic g, double c, double scale = 1.0, double shift = 0.0);

  double cdf(double x) const override;
  double cdf_left(double x) const override;
  double lower() const override { return lo_; }
  double upper() const override { return hi_; }
  std::vector<double> breakpoints() const override;

  const PiecewiseQuadratic& g() const noexcept { return g_; }
  double c() const noexcept { return c_; }

 private:
  double measure(double t, bool strict) const;

  PiecewiseQuadratic g_;
  double c_;
  double scale_;
  double shift_;
  double lo_;
  double hi_;
};

// Law of (X - median) / IQR.
class StandardizedLaw : public Law {
 public:
  explicit StandardizedLaw(std::shared_ptr<const Law> base);

  double cdf(double x) const override { return base_->cdf(median_ + iqr_ * x); }
  double cdf_left(double x) const override { return base_->cdf_left(median_ + iqr_ * x); }
  double lower() const override { return (base_->lower() - median_) / iqr_; }
  double upper() const override { return (base_->upper() - median_) / iqr_; }
  std::vector<double> breakpoints() const override;
  double quantile(double p) const override { return (base_->quantile(p) - median_) / iqr_; }

 private:
  std::shared_ptr<const Law> base_;
  double median_;
  double iqr_;
};

}  // namespace rotlab

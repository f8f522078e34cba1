#include "fracop/fractional_calculus.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracop {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw DomainError("TimeGrid: need at least 2 nodes");
  }
  if (nodes_.front() != 0.0) {
    throw DomainError("TimeGrid: first node must be 0");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw DomainError("TimeGrid: nodes must be finite and strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(double T, Index n) {
  if (!(T > 0.0) || n < 1) {
    throw DomainError("TimeGrid::uniform: need T > 0 and n >= 1");
  }
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (Index j = 0; j <= n; ++j) {
    t[static_cast<std::size_t>(j)] = T * static_cast<double>(j) / static_cast<double>(n);
  }
  t.back() = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::graded(double T, Index n, double r) {
  if (!(T > 0.0) || n < 1 || !(r >= 1.0)) {
    throw DomainError("TimeGrid::graded: need T > 0, n >= 1, r >= 1");
  }
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (Index j = 0; j <= n; ++j) {
    t[static_cast<std::size_t>(j)] =
        T * std::pow(static_cast<double>(j) / static_cast<double>(n), r);
  }
  t.back() = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::geometric(double t_first, double T, Index n) {
  if (!(t_first > 0.0) || !(T > t_first) || n < 2) {
    throw DomainError("TimeGrid::geometric: need 0 < t_first < T and n >= 2");
  }
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  t[0] = 0.0;
  const double lr = std::log(T / t_first) / static_cast<double>(n - 1);
  for (Index j = 1; j <= n; ++j) {
    t[static_cast<std::size_t>(j)] = t_first * std::exp(lr * static_cast<double>(j - 1));
  }
  t.back() = T;
  return TimeGrid(std::move(t));
}

double TimeGrid::min_step() const {
  double h = step(0);
  for (Index i = 1; i + 1 < size(); ++i) {
    h = std::min(h, step(i));
  }
  return h;
}

TimeGrid TimeGrid::coarsened() const {
  if ((size() - 1) % 2 != 0) {
    throw DomainError("TimeGrid::coarsened: need an even number of steps");
  }
  std::vector<double> t;
  for (Index i = 0; i < size(); i += 2) {
    t.push_back((*this)[i]);
  }
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::refined() const {
  std::vector<double> t;
  t.reserve(2 * nodes_.size() - 1);
  for (Index i = 0; i + 1 < size(); ++i) {
    t.push_back((*this)[i]);
    t.push_back(0.5 * ((*this)[i] + (*this)[i + 1]));
  }
  t.push_back(final_time());
  return TimeGrid(std::move(t));
}

GridFunction<double> real_part(const GridFunction<Complex>& u) {
  return GridFunction<double>(u.grid(), u.values().real());
}

double max_imag(const GridFunction<Complex>& u) {
  return u.values().size() == 0 ? 0.0 : u.values().imag().cwiseAbs().maxCoeff();
}

GridFunction<Complex> to_complex(const GridFunction<double>& u) {
  return GridFunction<Complex>(u.grid(), u.values().cast<Complex>());
}

Complex phi1(Complex z) {
  if (std::abs(z) < 0.25) {
    // sum z^k/(k+1)!
    Complex term(1.0, 0.0);
    Complex sum = term;
    for (int k = 1; k < 20; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z) {
  if (std::abs(z) < 0.25) {
    // sum z^k/(k+2)!
    Complex term(0.5, 0.0);
    Complex sum = term;
    for (int k = 1; k < 20; ++k) {
      term *= z / static_cast<double>(k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

namespace detail {

HatWeights product_weights(double a, double b, double p) {
  const double h = b - a;
  if (a >= 4.0 * h) {
    // (a + y)^{p-1} expanded in y/a; ratio <= 1/4 so 30 terms reach rounding.
    const double x = h / a;
    double binom = 1.0;
    double xk = 1.0;
    double left = 0.0;
    double right = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double c = binom * xk;
      left += c / (k + 2.0);
      right += c / ((k + 1.0) * (k + 2.0));
      if (std::abs(c) < 1e-18 * std::abs(right)) {
        break;
      }
      binom *= (p - 1.0 - k) / (k + 1.0);
      xk *= x;
    }
    const double scale = std::pow(a, p - 1.0) * h;
    return {scale * left, scale * right};
  }
  const double dp = pow_diff(b, a, p);
  const double dp1 = pow_diff(b, a, p + 1.0);
  const double left = (dp1 / (p + 1.0) - a * dp / p) / h;
  const double right = (b * dp / p - dp1 / (p + 1.0)) / h;
  return {left, right};
}

}  // namespace detail

namespace {

void put_number(std::ostream& os, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(std::ostream& os, const GridFunction<double>& u) {
  os << "t";
  for (Index k = 0; k < u.dim(); ++k) {
    os << ",v_" << k;
  }
  os << '\n';
  for (Index i = 0; i < u.size(); ++i) {
    put_number(os, u.time(i));
    for (Index k = 0; k < u.dim(); ++k) {
      os << ',';
      put_number(os, u[i](k));
    }
    os << '\n';
  }
}

void write_csv(std::ostream& os, const GridFunction<Complex>& u) {
  os << "t";
  for (Index k = 0; k < u.dim(); ++k) {
    os << ",v_" << k << "_re,v_" << k << "_im";
  }
  os << '\n';
  for (Index i = 0; i < u.size(); ++i) {
    put_number(os, u.time(i));
    for (Index k = 0; k < u.dim(); ++k) {
      os << ',';
      put_number(os, u[i](k).real());
      os << ',';
      put_number(os, u[i](k).imag());
    }
    os << '\n';
  }
}

GridFunction<double> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t", 0) != 0) {
    throw DomainError("read_csv: missing header");
  }
  const auto cols = static_cast<Index>(std::count(line.begin(), line.end(), ','));
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double x = 0.0;
      auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc()) {
        throw DomainError("read_csv: malformed number");
      }
      row.push_back(x);
      p = res.ptr;
      if (p < end && *p == ',') {
        ++p;
      }
    }
    if (static_cast<Index>(row.size()) != cols + 1) {
      throw DomainError("read_csv: ragged row");
    }
    times.push_back(row.front());
    rows.push_back(std::move(row));
  }
  TimeGrid grid(times);
  RMatrix values(cols, grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    for (Index k = 0; k < cols; ++k) {
      values(k, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k) + 1];
    }
  }
  return GridFunction<double>(std::move(grid), std::move(values));
}

}  // namespace fracop

#include "ppa/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ppa {

void CsrMatrix::validate() const {
  if (n < 0) throw std::invalid_argument("CsrMatrix: negative dimension");
  if (row_ptr.size() != static_cast<size_t>(n) + 1) {
    throw std::invalid_argument("CsrMatrix: row_ptr length must be n+1");
  }
  if (row_ptr.front() != 0 || row_ptr.back() != nnz()) {
    throw std::invalid_argument("CsrMatrix: row_ptr endpoints invalid");
  }
  for (int i = 0; i < n; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) {
      throw std::invalid_argument("CsrMatrix: row_ptr not nondecreasing");
    }
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      if (col_idx[p] < 0 || col_idx[p] >= n) {
        throw std::invalid_argument("CsrMatrix: column index out of range");
      }
      if (p > row_ptr[i] && col_idx[p] <= col_idx[p - 1]) {
        throw std::invalid_argument(
            "CsrMatrix: columns not strictly increasing within a row");
      }
    }
  }
  if (col_idx.size() != values.size()) {
    throw std::invalid_argument("CsrMatrix: col_idx/values size mismatch");
  }
}

void CsrMatrix::multiply(const Eigen::Ref<const Eigen::VectorXd>& x,
                         Eigen::Ref<Eigen::VectorXd> y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      s += values[p] * x[col_idx[p]];
    }
    y[i] = s;
  }
}

CsrMatrix CsrMatrix::from_triplets(
    int n, std::vector<std::tuple<int, int, double>> t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) < std::get<1>(b);
  });
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(t.size());
  m.values.reserve(t.size());
  for (size_t p = 0; p < t.size(); ++p) {
    auto [i, j, v] = t[p];
    if (i < 0 || i >= n || j < 0 || j >= n) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    if (!m.col_idx.empty() && p > 0 && std::get<0>(t[p - 1]) == i &&
        std::get<1>(t[p - 1]) == j) {
      m.values.back() += v;  // accumulate duplicates
      continue;
    }
    m.col_idx.push_back(j);
    m.values.push_back(v);
    ++m.row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  m.validate();
  return m;
}

bool SpectrumSpec::real_only(double tol) const {
  for (const auto& z : eigenvalues) {
    if (std::abs(z.imag()) > tol) return false;
  }
  return true;
}

namespace {

class DiagonalOperator final : public LinearOperator {
 public:
  explicit DiagonalOperator(std::vector<double> d) : diag_(std::move(d)) {
    if (diag_.empty()) {
      throw std::invalid_argument("make_diagonal: empty diagonal");
    }
  }

  int dim() const override { return static_cast<int>(diag_.size()); }
  OperatorKind kind() const override { return OperatorKind::diagonal; }
  int mvps_per_apply() const override { return 1; }
  const std::vector<double>* diagonal() const override { return &diag_; }
  double nnzr() const override { return 1.0; }

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
             Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const override {
    ++rec.mvps;
    for (int i = 0; i < dim(); ++i) y[i] = diag_[i] * x[i];
  }

 private:
  std::vector<double> diag_;
};

class CsrOperator final : public LinearOperator {
 public:
  explicit CsrOperator(CsrMatrix m) : m_(std::move(m)) { m_.validate(); }

  int dim() const override { return m_.n; }
  OperatorKind kind() const override { return OperatorKind::csr; }
  int mvps_per_apply() const override { return 1; }
  double nnzr() const override { return m_.nnzr(); }

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
             Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const override {
    ++rec.mvps;
    m_.multiply(x, y);
  }

 private:
  CsrMatrix m_;
};

class Block2Operator final : public LinearOperator {
 public:
  explicit Block2Operator(OperatorPtr a) : a_(std::move(a)) {}

  int dim() const override { return 2 * a_->dim(); }
  OperatorKind kind() const override { return OperatorKind::block2; }
  int mvps_per_apply() const override { return 2 * a_->mvps_per_apply(); }
  double nnzr() const override { return a_->nnzr(); }

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
             Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const override {
    const int n = a_->dim();
    a_->apply(x.head(n), y.head(n), rec);
    a_->apply(x.tail(n), y.tail(n), rec);
  }

 private:
  OperatorPtr a_;
};

class ShiftedOperator final : public LinearOperator {
 public:
  ShiftedOperator(OperatorPtr a, double mu) : a_(std::move(a)), mu_(mu) {}

  int dim() const override { return a_->dim(); }
  OperatorKind kind() const override { return OperatorKind::shifted; }
  int mvps_per_apply() const override { return a_->mvps_per_apply(); }
  double nnzr() const override { return a_->nnzr(); }

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
             Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const override {
    a_->apply(x, y, rec);
    if (mu_ != 0.0) axpy(-mu_, x, y, rec);
  }

 private:
  OperatorPtr a_;
  double mu_;
};

}  // namespace

OperatorPtr make_diagonal(std::vector<double> diag_values) {
  return std::make_shared<DiagonalOperator>(std::move(diag_values));
}

OperatorPtr make_csr_operator(CsrMatrix matrix) {
  return std::make_shared<CsrOperator>(std::move(matrix));
}

OperatorPtr make_block2(OperatorPtr a) {
  return std::make_shared<Block2Operator>(std::move(a));
}

OperatorPtr make_shifted(OperatorPtr a, double mu) {
  return std::make_shared<ShiftedOperator>(std::move(a), mu);
}

CsrMatrix make_convection_diffusion(int grid_n) {
  if (grid_n < 2) {
    throw std::invalid_argument("make_convection_diffusion: grid_n < 2");
  }
  const int n = grid_n * grid_n;
  const double h = 1.0 / (grid_n + 1);
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(5ull * n);
  m.values.reserve(5ull * n);

  auto index = [grid_n](int ix, int iy) { return iy * grid_n + ix; };

  int pos = 0;
  for (int iy = 0; iy < grid_n; ++iy) {
    const double y = (iy + 1) * h;
    const bool lower = y <= 0.5 + 1e-14;
    const double eps = lower ? 1.0 : 100.0;
    const double c = lower ? 20.0 : 2000.0;
    const double center = 4.0 * eps / (h * h);
    const double east = -eps / (h * h) + c / (2.0 * h);
    const double west = -eps / (h * h) - c / (2.0 * h);
    const double ns = -eps / (h * h);
    for (int ix = 0; ix < grid_n; ++ix) {
      // south, west, center, east, north: column-sorted for this ordering
      if (iy > 0) {
        m.col_idx.push_back(index(ix, iy - 1));
        m.values.push_back(ns);
        ++pos;
      }
      if (ix > 0) {
        m.col_idx.push_back(index(ix - 1, iy));
        m.values.push_back(west);
        ++pos;
      }
      m.col_idx.push_back(index(ix, iy));
      m.values.push_back(center);
      ++pos;
      if (ix + 1 < grid_n) {
        m.col_idx.push_back(index(ix + 1, iy));
        m.values.push_back(east);
        ++pos;
      }
      if (iy + 1 < grid_n) {
        m.col_idx.push_back(index(ix, iy + 1));
        m.values.push_back(ns);
        ++pos;
      }
      m.row_ptr[index(ix, iy) + 1] = pos;
    }
  }
  m.validate();
  return m;
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_market: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_matrix_market: empty file");
  }
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  std::transform(object.begin(), object.end(), object.begin(), ::tolower);
  std::transform(format.begin(), format.end(), format.begin(), ::tolower);
  std::transform(field.begin(), field.end(), field.begin(), ::tolower);
  std::transform(symmetry.begin(), symmetry.end(), symmetry.begin(),
                 ::tolower);
  if (banner != "%%MatrixMarket" || object != "matrix" ||
      format != "coordinate") {
    throw std::runtime_error("read_matrix_market: malformed header");
  }
  if (field != "real") {
    throw std::runtime_error("read_matrix_market: unsupported field '" +
                             field + "' (only real)");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw std::runtime_error("read_matrix_market: unsupported symmetry '" +
                             symmetry + "'");
  }

  // skip comments
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sz(line);
  long long rows = 0, cols = 0, entries = 0;
  if (!(sz >> rows >> cols >> entries) || rows <= 0 || cols <= 0) {
    throw std::runtime_error("read_matrix_market: bad size line");
  }
  if (rows != cols) {
    throw std::runtime_error("read_matrix_market: matrix must be square");
  }

  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(static_cast<size_t>(entries) * (symmetry == "symmetric" ? 2 : 1));
  for (long long e = 0; e < entries; ++e) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      throw std::runtime_error("read_matrix_market: truncated entry list");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw std::runtime_error("read_matrix_market: index out of range");
    }
    trip.emplace_back(int(i - 1), int(j - 1), v);
    if (symmetry == "symmetric" && i != j) {
      trip.emplace_back(int(j - 1), int(i - 1), v);
    }
  }
  return CsrMatrix::from_triplets(static_cast<int>(rows), std::move(trip));
}

}  // namespace ppa

#include "heatbem/krylov.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace heatbem {

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
  case PreconditionerKind::Identity:
    return "none";
  case PreconditionerKind::Diagonal:
    return "diag";
  case PreconditionerKind::Calderon:
    return "calderon";
  }
  return "unknown";
}

Preconditioner Preconditioner::identity() { return {}; }

Preconditioner Preconditioner::diagonal(const Matrix& a) {
  if (a.rows() != a.cols())
    throw ConfigError("diagonal preconditioner needs a square matrix");
  const Vector d = a.diagonal();
  if (!(d.array() > 0.0).all())
    throw ConfigError("diagonal preconditioner needs a strictly positive diagonal");
  Preconditioner p;
  p.kind_ = PreconditionerKind::Diagonal;
  p.scaling_ = d.cwiseInverse();
  return p;
}

Preconditioner Preconditioner::calderon(const Vector& mass,
                                        std::shared_ptr<const Matrix> hypersingular) {
  if (!hypersingular)
    throw ConfigError("Calderon preconditioner needs a hypersingular matrix");
  if (hypersingular->rows() != mass.size() || hypersingular->cols() != mass.size())
    throw ConfigError("Calderon preconditioner: mass and hypersingular sizes differ");
  if (!(mass.array() != 0.0).all())
    throw ConfigError("Calderon preconditioner: mass matrix has a zero diagonal entry");
  Preconditioner p;
  p.kind_ = PreconditionerKind::Calderon;
  p.scaling_ = mass.cwiseInverse();
  p.hypersingular_ = std::move(hypersingular);
  return p;
}

Eigen::Index Preconditioner::size() const { return scaling_.size(); }

Vector Preconditioner::apply(const Vector& r) const {
  switch (kind_) {
  case PreconditionerKind::Identity:
    return r;
  case PreconditionerKind::Diagonal:
    return scaling_.cwiseProduct(r);
  case PreconditionerKind::Calderon:
    // M is diagonal, so M^{-T} = M^{-1}
    return scaling_.cwiseProduct(*hypersingular_ * scaling_.cwiseProduct(r));
  }
  return r;
}

Matrix Preconditioner::apply_to(const Matrix& a) const {
  switch (kind_) {
  case PreconditionerKind::Identity:
    return a;
  case PreconditionerKind::Diagonal:
    return scaling_.asDiagonal() * a;
  case PreconditionerKind::Calderon: {
    const Matrix scaled = scaling_.asDiagonal() * a;
    return scaling_.asDiagonal() * (*hypersingular_ * scaled);
  }
  }
  return a;
}

SolveReport gmres(const LinearOperator& a, const Vector& b, const Preconditioner& p,
                  const GmresOptions& options) {
  if (!(options.tol > 0.0))
    throw ConfigError("GMRES tolerance must be positive");
  if (options.max_iter < 1)
    throw ConfigError("GMRES needs at least one iteration");
  if (p.kind() != PreconditionerKind::Identity && p.size() != b.size())
    throw ConfigError("preconditioner size does not match the system");

  const Eigen::Index n = b.size();
  SolveReport report;
  report.solution = Vector::Zero(n);
  const double bnorm = b.norm();
  report.relative_residual_history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) {
    report.converged = true;
    return report;
  }

  // the Krylov space cannot grow beyond n
  const int m = static_cast<int>(std::min<Eigen::Index>(options.max_iter, n));
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  basis.push_back(b / bnorm);
  Matrix h = Matrix::Zero(m + 1, m);
  Vector cs = Vector::Zero(m), sn = Vector::Zero(m);
  Vector g = Vector::Zero(m + 1);
  g(0) = bnorm;
  Vector w(n);

  const auto assemble_solution = [&](int k) {
    const Vector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Vector v = Vector::Zero(n);
    for (int i = 0; i < k; ++i)
      v += y(i) * basis[static_cast<std::size_t>(i)];
    return p.apply(v);
  };

  for (int j = 0; j < m; ++j) {
    a(p.apply(basis[static_cast<std::size_t>(j)]), w);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double c = basis[static_cast<std::size_t>(i)].dot(w);
        h(i, j) += c;
        w -= c * basis[static_cast<std::size_t>(i)];
      }
    }
    const double column_norm = h.col(j).head(j + 1).norm();
    h(j + 1, j) = w.norm();
    report.breakdown = h(j + 1, j) <= 1e-14 * column_norm;

    for (int i = 0; i < j; ++i) {
      const double t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
      h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
      h(i, j) = t;
    }
    const double r = std::hypot(h(j, j), h(j + 1, j));
    cs(j) = h(j, j) / r;
    sn(j) = h(j + 1, j) / r;
    h(j, j) = r;
    const double hj1 = h(j + 1, j);
    h(j + 1, j) = 0.0;
    g(j + 1) = -sn(j) * g(j);
    g(j) = cs(j) * g(j);

    report.iterations = j + 1;
    report.relative_residual_history.push_back(std::abs(g(j + 1)) / bnorm);

    const bool estimate_met = std::abs(g(j + 1)) <= options.tol * bnorm;
    const bool last = j + 1 == m;
    if (estimate_met || report.breakdown || last) {
      report.solution = assemble_solution(j + 1);
      Vector ax(n);
      a(report.solution, ax);
      report.true_relative_residual = (b - ax).norm() / bnorm;
      report.converged = report.true_relative_residual <= options.tol;
      if (report.converged || report.breakdown || last)
        return report;
    }
    basis.push_back(w / hj1);
  }
  return report;
}

SolveReport gmres(const Matrix& a, const Vector& b, const Preconditioner& p,
                  const GmresOptions& options) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw ConfigError("GMRES needs a square matrix matching the right-hand side");
  return gmres([&a](const Vector& in, Vector& out) { out.noalias() = a * in; }, b, p, options);
}

Vector direct_solve(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw ConfigError("direct_solve needs a square matrix matching the right-hand side");
  if (a.rows() == 0)
    return Vector();
  const Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot > 1e-15 * static_cast<double>(a.rows()) * scale))
    throw NumericalError("direct_solve: matrix is singular to working precision");
  return lu.solve(b);
}

} // namespace heatbem

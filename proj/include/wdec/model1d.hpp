#pragma once

#include <Eigen/Dense>
#include <functional>

namespace wdec {

/// Uniform 1-dimensional grid carrying a weight function and its first two
/// derivatives (4th-order finite differences; one-sided at interval ends).
struct Grid1D {
  bool circle = true;
  int nodes = 0;        // circle: one node per cell; interval: cells + 1
  double length = 0;
  double origin = 0;
  Eigen::VectorXd x, phi, dphi, ddphi;

  double h() const { return circle ? length / nodes : length / (nodes - 1); }
};

Grid1D make_circle_grid(int cells, double length,
                        const std::function<double(double)>& phi);
Grid1D make_interval_grid(int cells, double a, double b,
                          const std::function<double(double)>& phi);

/// Spectra of the weighted Laplacian on a circle: functions carry the
/// potential phi'^2 - phi'', 1-forms phi'^2 + phi''. Ascending, the
/// function list includes the near-zero ground state.
struct CircleSpectrum {
  Eigen::VectorXd functions;
  Eigen::VectorXd one_forms;
};
CircleSpectrum circle_witten_spectrum(const Grid1D& g, int k);

/// Fourth-order Richardson extrapolation from a grid and its refinement.
Eigen::VectorXd richardson4(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine);

enum class IntervalBc { natural, fixed };  // free endpoint flux vs zero values

/// Function spectrum on an interval via the first-order quadratic form
/// (u' + phi' u)^2; natural bc leaves endpoints free, fixed pins them to 0.
Eigen::VectorXd interval_witten_spectrum(const Grid1D& g, IntervalBc bc, int k);

/// The three operator expressions on a weighted circle, assembled from one
/// shared first-derivative matrix so that their differences measure only
/// the zero-order terms:
///   direct   adjoint-pair composition of the twisted derivative
///   lie      Laplacian + |X|^2 + L_X + L_X^*
///   zeroth   Laplacian + |X|^2 + div X + hess_coeff * Hess(phi)
/// Differences are reported as sup-norm actions on smooth probe functions
/// (entrywise matrix norms do not see the cancellation).
struct ThreeForms {
  Eigen::MatrixXd direct, lie, zeroth;
  double diff_lie = 0;
  double diff_zeroth = 0;
};
ThreeForms assemble_three_forms(const Grid1D& g, int p, double hess_coeff);

/// Square of the twisted differential with a (possibly non-gradient) field
/// X on a 2-torus grid, applied to a function f: the result is a 2-form
/// equal to f * d(X flat) up to discretization error.
struct TwistedSquare {
  Eigen::MatrixXd applied;
  Eigen::MatrixXd expected;
  double max_diff = 0;
};
TwistedSquare twisted_square(int cells, double length,
                             const std::function<double(double, double)>& Xx,
                             const std::function<double(double, double)>& Xy,
                             const std::function<double(double, double)>& f);

} // namespace wdec

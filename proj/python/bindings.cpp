#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdchain/blahut_arimoto.hpp"
#include "rdchain/constants.hpp"
#include "rdchain/ellipsoid.hpp"
#include "rdchain/error.hpp"
#include "rdchain/experiments.hpp"
#include "rdchain/rd_curve.hpp"
#include "rdchain/sparse.hpp"
#include "rdchain/tail.hpp"
#include "rdchain/width.hpp"

namespace py = pybind11;
using namespace rdchain;

namespace {

DiscreteDistribution measure(const Eigen::MatrixXd& points, std::vector<double> weights) {
  if (weights.empty()) weights.assign(static_cast<std::size_t>(points.rows()), 1.0);
  return make_distribution(share(FiniteMetricSpace::from_points(points)), weights);
}

py::dict report_dict(const ExperimentRun& run) {
  py::dict d;
  std::vector<std::size_t> ns;
  std::vector<double> mse, se;
  for (const auto& r : run.report.rows) {
    ns.push_back(r.n);
    mse.push_back(r.mean_mse);
    se.push_back(r.se);
  }
  d["n"] = ns;
  d["mean_mse"] = mse;
  d["se"] = se;
  d["slope"] = run.report.slope;
  d["intercept"] = run.report.intercept;
  d["ci"] = py::make_tuple(run.report.ci_low, run.report.ci_high);
  d["target"] = run.report.target;
  d["heuristic"] = run.heuristic;
  return d;
}

std::vector<std::size_t> grid_or(const std::vector<std::size_t>& ns, std::vector<std::size_t> fallback) {
  return ns.empty() ? fallback : ns;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate-distortion chaining toolkit";
  m.attr("__version__") = RDCHAIN_VERSION;

  // Messages start with the error kind, e.g. "UnsupportedBeta: ...".
  py::register_exception<Error>(m, "RdchainError", PyExc_ValueError);

  m.def("lower_constant", [] {
    const auto c = lower_constant();
    return py::make_tuple(c.value, c.argmax);
  });
  m.def("majorizing_constant", [] {
    const auto c = majorizing_constant();
    return py::make_tuple(c.value, c.argmax);
  });

  m.def(
      "blahut_arimoto",
      [](const Eigen::MatrixXd& points, std::vector<double> weights, double target, double tolerance) {
        const auto r = blahut_arimoto(measure(points, std::move(weights)), target, tolerance);
        return py::make_tuple(r.rate, r.distortion_sq);
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{}, py::arg("target_distortion_sq"),
      py::arg("tolerance") = 1e-7);
  m.def(
      "rd_curve",
      [](const Eigen::MatrixXd& points, std::vector<double> weights, std::size_t grid_points) {
        const auto mu = measure(points, std::move(weights));
        const auto c = rd_curve(mu, default_sigma_grid(sigma_m(mu), grid_points));
        std::vector<double> s, r;
        for (const auto& x : c.samples) {
          s.push_back(x.sigma);
          r.push_back(x.rate);
        }
        py::dict d;
        d["sigma"] = s;
        d["rate"] = r;
        d["sigma_m"] = c.sigma_m;
        d["entropy"] = c.entropy;
        d["integral"] = rd_integral(c);
        return d;
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{}, py::arg("grid_points") = 128);
  m.def(
      "penalized_rd_integral",
      [](const Eigen::MatrixXd& points, std::vector<double> weights) {
        return penalized_rd_integral(measure(points, std::move(weights)));
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{});
  m.def("gaussian_rd", &gaussian_rd, py::arg("sigma_m_sq"), py::arg("sigma_sq"));

  m.def(
      "mc_sup",
      [](const Eigen::MatrixXd& points, std::size_t samples, std::uint64_t seed) {
        RngStream rng(seed, fnv1a64("python.mc_sup"));
        const auto e = mc_sup(LinearProcessSpec(points), samples, rng);
        return py::make_tuple(e.value, e.std_error);
      },
      py::arg("points"), py::arg("samples") = 100000, py::arg("seed") = 1);
  m.def(
      "width_of_measure",
      [](const Eigen::MatrixXd& points, std::vector<double> weights, std::size_t pairs, std::uint64_t seed) {
        RngStream rng(seed, fnv1a64("python.width"));
        const LinearProcessSpec p(points);
        const auto e = width_of_measure(p, measure(points, std::move(weights)), pairs, rng);
        return py::make_tuple(e.value, e.std_error);
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{}, py::arg("pairs") = 4096, py::arg("seed") = 1);
  m.def(
      "trace_sqrt_cov_bound",
      [](const Eigen::MatrixXd& points, std::vector<double> weights) {
        return trace_sqrt_cov_bound(measure(points, std::move(weights)));
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{});
  m.def(
      "sandwich_check",
      [](const Eigen::MatrixXd& points, std::vector<double> weights, std::size_t pairs, std::uint64_t seed) {
        RngStream rng(seed, fnv1a64("python.sandwich"));
        const auto s = sandwich_check(LinearProcessSpec(points), measure(points, std::move(weights)), pairs, rng);
        py::dict d;
        d["rd_integral"] = s.rd_integral;
        d["width"] = s.width;
        d["width_se"] = s.width_se;
        d["lower"] = s.lower;
        d["upper"] = s.upper;
        d["pass"] = s.pass();
        return d;
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{}, py::arg("pairs") = 4096, py::arg("seed") = 1);

  m.def("sobolev_axes", [](double beta, std::size_t D) { return Eigen::VectorXd(sobolev_ellipsoid(beta, D).axes); });
  m.def(
      "project_ellipsoid",
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& axes) { return project_ellipsoid(x, EllipsoidSpec(axes)); },
      py::arg("x"), py::arg("axes"));
  m.def("c_beta", [](double beta) {
    const auto c = c_beta(beta);
    return py::make_tuple(c.c, c.C);
  });
  m.def("weak_lq_radius", &weak_lq_radius, py::arg("x"), py::arg("q"));
  m.def(
      "project_weak_lq",
      [](const Eigen::VectorXd& x, double q, double r) {
        return project_weak_lq(x, WeakLqSpec(q, r, static_cast<std::size_t>(x.size())));
      },
      py::arg("x"), py::arg("q"), py::arg("r"));
  m.def("f_func", &f_func);
  m.def("g_env", &g_env);
  m.def(
      "psi_bound",
      [](double lambda, double n, double coef, double exponent) {
        return psi_bound(lambda, n, PowerLawG{coef, exponent});
      },
      py::arg("lam"), py::arg("n"), py::arg("coef"), py::arg("exponent"));

  m.def(
      "run_toy",
      [](std::vector<std::size_t> ns, std::size_t replicas, std::string noise, std::uint64_t seed) {
        ToyConfig c;
        c.ns = grid_or(ns, c.ns);
        c.replicas = replicas;
        c.noise = parse_noise_kind(noise);
        c.seed = seed;
        const auto run = [&] {
          py::gil_scoped_release release;
          return run_toy(c);
        }();
        return report_dict(run);
      },
      py::arg("ns") = std::vector<std::size_t>{}, py::arg("replicas") = 200, py::arg("noise") = "gaussian",
      py::arg("seed") = 1);
  m.def(
      "run_ellipsoid",
      [](double beta, std::vector<std::size_t> ns, std::size_t replicas, std::string noise, std::uint64_t seed) {
        EllipsoidConfig c;
        c.beta = beta;
        c.ns = grid_or(ns, c.ns);
        c.replicas = replicas;
        c.noise = parse_noise_kind(noise);
        c.seed = seed;
        const auto run = [&] {
          py::gil_scoped_release release;
          return run_ellipsoid(c);
        }();
        return report_dict(run);
      },
      py::arg("beta") = 1.0, py::arg("ns") = std::vector<std::size_t>{}, py::arg("replicas") = 50,
      py::arg("noise") = "gaussian", py::arg("seed") = 1);
  m.def(
      "run_sparse",
      [](double q, double r, std::size_t d, std::vector<std::size_t> ns, std::size_t replicas, std::uint64_t seed) {
        SparseConfig c;
        c.q = q;
        c.r = r;
        c.d = d;
        c.ns = grid_or(ns, c.ns);
        c.replicas = replicas;
        c.seed = seed;
        const auto run = [&] {
          py::gil_scoped_release release;
          return run_sparse(c);
        }();
        return report_dict(run);
      },
      py::arg("q") = 0.5, py::arg("r") = 1.0, py::arg("d") = 512, py::arg("ns") = std::vector<std::size_t>{},
      py::arg("replicas") = 50, py::arg("seed") = 1);
}

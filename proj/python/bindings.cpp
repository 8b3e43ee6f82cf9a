#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "irnn/baseline.hpp"
#include "irnn/bench.hpp"
#include "irnn/imaging.hpp"
#include "irnn/penalty.hpp"
#include "irnn/solver.hpp"
#include "irnn/wsvt.hpp"

namespace py = pybind11;
using namespace irnn;

namespace {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

WeightVector to_weights(const std::vector<double> &w) {
    std::vector<ExtendedWeight> entries;
    for (double x : w)
        entries.push_back(std::isinf(x) && x > 0 ? ExtendedWeight::infinity()
                                                 : ExtendedWeight(x));
    return WeightVector(std::move(entries));
}

std::vector<double> from_weights(const WeightVector &w) {
    std::vector<double> out;
    for (const auto &x : w.entries())
        out.push_back(x.value());
    return out;
}

CompletionProblem make_problem(const Matrix &observed, const BoolArray &mask) {
    if (observed.rows() != mask.rows() || observed.cols() != mask.cols())
        throw PreconditionError("observed values and mask differ in shape");
    return CompletionProblem(ObservationMask(mask), observed);
}

ImageBuffer to_image(const ImageArray &a) {
    if (a.ndim() != 3 || a.shape(2) != 3)
        throw PreconditionError("expected an (height, width, 3) uint8 array");
    ImageBuffer img(a.shape(1), a.shape(0));
    std::copy(a.data(), a.data() + a.size(), img.pixels().begin());
    return img;
}

ImageArray from_image(const ImageBuffer &img) {
    ImageArray out({img.height(), img.width(), Index{3}});
    std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
    return out;
}

BoolArray mask_array(const CorruptionMask &m) {
    BoolArray out(m.height(), m.width());
    for (Index y = 0; y < m.height(); ++y)
        for (Index x = 0; x < m.width(); ++x)
            out(y, x) = m.observed(x, y);
    return out;
}

CorruptionMask to_mask(const BoolArray &a) {
    CorruptionMask m(a.cols(), a.rows());
    for (Index y = 0; y < a.rows(); ++y)
        for (Index x = 0; x < a.cols(); ++x)
            m.set_observed(x, y, a(y, x));
    return m;
}

MethodSpec method_from(const std::string &name, std::optional<Penalty> penalty) {
    if (name == "convex")
        return MethodSpec::convex_baseline();
    if (penalty)
        return MethodSpec::irnn(*penalty);
    return MethodSpec::irnn(Penalty::make(parse_penalty_kind(name), 1));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Iteratively reweighted nuclear norm solvers";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    py::enum_<PenaltyKind> kind(m, "PenaltyKind");
    for (PenaltyKind k : {PenaltyKind::Lp, PenaltyKind::SCAD, PenaltyKind::Logarithm,
                          PenaltyKind::MCP, PenaltyKind::CappedL1, PenaltyKind::ETP,
                          PenaltyKind::Geman, PenaltyKind::Laplace,
                          PenaltyKind::NuclearConvex, PenaltyKind::TruncatedNuclear}) {
        std::string name(to_string(k));
        std::replace(name.begin(), name.end(), '-', '_');
        kind.value(name.c_str(), k);
    }

    py::class_<Penalty>(m, "Penalty")
        .def(py::init([](const std::string &kind, double lambda_, std::optional<double> gamma,
                         std::optional<double> p, Index trunc_rank) {
                 Penalty pen = Penalty::make(parse_penalty_kind(kind), lambda_);
                 if (gamma)
                     pen.gamma = *gamma;
                 if (p)
                     pen.p = *p;
                 pen.trunc_rank = trunc_rank;
                 pen.validate();
                 return pen;
             }),
             py::arg("kind"), py::arg("lambda_") = 1.0, py::arg("gamma") = py::none(),
             py::arg("p") = py::none(), py::arg("trunc_rank") = 0)
        .def_readwrite("kind", &Penalty::kind)
        .def_readwrite("lambda_", &Penalty::lambda)
        .def_readwrite("gamma", &Penalty::gamma)
        .def_readwrite("p", &Penalty::p)
        .def_readwrite("trunc_rank", &Penalty::trunc_rank)
        .def("validate", &Penalty::validate)
        .def("value", [](const Penalty &pen, double t) { return value(pen, t); })
        .def("supergradient",
             [](const Penalty &pen, double t) { return supergradient(pen, t).value(); })
        .def("__repr__", [](const Penalty &pen) {
            return "Penalty('" + std::string(to_string(pen.kind)) +
                   "', lambda_=" + std::to_string(pen.lambda) + ")";
        });

    m.def("penalty_kinds", [] {
        std::vector<std::string> out;
        for (PenaltyKind k : nonconvex_kinds())
            out.emplace_back(to_string(k));
        return out;
    }, "Names of the eight nonconvex penalties.");

    m.def("weights_from_singular_values",
          [](const Penalty &pen, const std::vector<double> &sigma) {
              return from_weights(weights_from_singular_values(pen, sigma));
          },
          py::arg("penalty"), py::arg("sigma"));

    m.def("svd", [](const Matrix &Y) {
        const auto d = svd(Y);
        return py::make_tuple(d.U, d.sigma, d.V);
    }, py::arg("Y"), "Thin SVD; returns (U, sigma, V) with Y = U diag(sigma) V^T.");
    m.def("singular_values", &singular_values, py::arg("Y"));
    m.def("wsvt",
          [](const Matrix &Y, const std::vector<double> &w) {
              return wsvt_apply(Y, to_weights(w));
          },
          py::arg("Y"), py::arg("weights"),
          "Weighted singular value thresholding; weights nondecreasing, inf allowed.");
    m.def("weighted_nuclear_norm",
          [](const Matrix &X, const std::vector<double> &w) {
              return weighted_nuclear_norm(X, to_weights(w));
          },
          py::arg("X"), py::arg("weights"));

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("X", &SolveReport::final_X)
        .def_readonly("sigma", &SolveReport::final_sigma)
        .def_readonly("objective", &SolveReport::objective_trace)
        .def_readonly("rank", &SolveReport::rank_trace)
        .def_readonly("step", &SolveReport::step_trace)
        .def_readonly("lambda_", &SolveReport::lambda_trace)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("residual", &SolveReport::final_residual)
        .def_property_readonly("termination", [](const SolveReport &r) {
            return std::string(to_string(r.termination));
        });

    m.def("complete",
          [](const Matrix &observed, const BoolArray &mask, const Penalty &pen, bool noisy,
             std::optional<double> fixed_lambda, std::optional<int> max_iters) {
              const auto problem = make_problem(observed, mask);
              const CompletionLoss loss(problem);
              SolverConfig cfg = noisy ? noisy_config(problem) : noise_free_config(problem);
              Penalty p = pen;
              if (fixed_lambda) {
                  cfg.continuation.reset();
                  p.lambda = *fixed_lambda;
              }
              if (max_iters)
                  cfg.max_iters = *max_iters;
              py::gil_scoped_release release;
              return solve(loss, p, cfg);
          },
          py::arg("observed"), py::arg("mask"), py::arg("penalty"), py::arg("noisy") = false,
          py::arg("fixed_lambda") = py::none(), py::arg("max_iters") = py::none(),
          "IRNN matrix completion. Without fixed_lambda the preset continuation is used.");

    m.def("complete_convex",
          [](const Matrix &observed, const BoolArray &mask, bool noisy,
             std::optional<double> fixed_lambda, std::optional<int> max_iters) {
              const auto problem = make_problem(observed, mask);
              const CompletionLoss loss(problem);
              ConvexConfig cfg =
                  noisy ? convex_noisy_config(problem) : convex_noise_free_config(problem);
              if (fixed_lambda) {
                  cfg.continuation.reset();
                  cfg.lambda = *fixed_lambda;
              }
              if (max_iters)
                  cfg.max_iters = *max_iters;
              py::gil_scoped_release release;
              return solve_convex(loss, cfg);
          },
          py::arg("observed"), py::arg("mask"), py::arg("noisy") = false,
          py::arg("fixed_lambda") = py::none(), py::arg("max_iters") = py::none());

    m.def("gen_lowrank", &gen_lowrank, py::arg("m"), py::arg("n"), py::arg("r"),
          py::arg("seed"));
    m.def("sample_mask",
          [](Index rows, Index cols, double fraction, std::uint64_t seed) {
              return BoolArray(sample_mask(rows, cols, fraction, seed).dense());
          },
          py::arg("m"), py::arg("n"), py::arg("fraction"), py::arg("seed"));
    m.def("relative_error", &relative_error, py::arg("X_hat"), py::arg("M"));

    m.def("psnr",
          [](const ImageArray &a, const ImageArray &b) { return psnr(to_image(a), to_image(b)); },
          py::arg("reference"), py::arg("candidate"));
    m.def("corrupt_random",
          [](const ImageArray &img, double fraction, std::uint64_t seed) {
              auto [out, mask] = corrupt_random(to_image(img), fraction, seed);
              return py::make_tuple(from_image(out), mask_array(mask));
          },
          py::arg("image"), py::arg("fraction"), py::arg("seed"));
    m.def("inpaint",
          [](const ImageArray &img, const BoolArray &mask, const std::string &method,
             std::optional<Penalty> penalty, std::optional<int> max_iters) {
              InpaintOptions opt = InpaintOptions::preset(method_from(method, penalty));
              if (max_iters)
                  opt.max_iters = *max_iters;
              const ImageBuffer in = to_image(img);
              const CorruptionMask cm = to_mask(mask);
              ImageBuffer out;
              {
                  py::gil_scoped_release release;
                  out = inpaint(in, cm, opt);
              }
              return from_image(out);
          },
          py::arg("image"), py::arg("mask"), py::arg("method") = "lp",
          py::arg("penalty") = py::none(), py::arg("max_iters") = py::none(),
          "Per-channel completion; method is a penalty name or 'convex'.");
    m.def("read_png", [](const std::string &path) { return from_image(read_png(path)); });
    m.def("write_png", [](const std::string &path, const ImageArray &img) {
        write_png(path, to_image(img));
    });
}

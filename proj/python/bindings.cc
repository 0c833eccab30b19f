// Copyright 2026 The QuEPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <optional>
#include <string>
#include <vector>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quepp/backend.h"
#include "quepp/circuit.h"
#include "quepp/circuit_text.h"
#include "quepp/cpt.h"
#include "quepp/errors.h"
#include "quepp/generators.h"
#include "quepp/pipeline.h"
#include "quepp/sampler.h"
#include "quepp/statevector.h"

namespace py = pybind11;
using namespace quepp;

namespace {

class PyBackend : public Backend {
 public:
  std::string name() const override { PYBIND11_OVERRIDE_PURE(std::string, Backend, name); }
  std::vector<JobResult> submit_batch(std::span<const Job> jobs, const ExecutionPlan& plan) const override {
    py::gil_scoped_acquire gil;
    const py::function fn = py::get_override(static_cast<const Backend*>(this), "submit_batch");
    if (!fn) throw InternalError("Backend.submit_batch is not implemented");
    return fn(std::vector<Job>(jobs.begin(), jobs.end()), plan).cast<std::vector<JobResult>>();
  }
};

GateKind gate_kind(const std::string& name) {
  for (GateKind k : kAllGateKinds)
    if (gate_mnemonic(k) == name) return k;
  throw py::value_error("unknown gate '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_quepp, m) {
  m.doc() = "Clifford perturbation theory boosted by noisy quantum executions";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::enum_<InputKind>(m, "InputKind").value("ALL_ZERO", InputKind::kAllZero).value("ALL_PLUS", InputKind::kAllPlus);

  py::class_<PauliString>(m, "PauliString")
      .def(py::init(&PauliString::parse), py::arg("text"))
      .def_property_readonly("num_qubits", &PauliString::num_qubits)
      .def_property_readonly("sign", &PauliString::sign)
      .def("letter", &PauliString::letter)
      .def("weight", &PauliString::weight)
      .def("support", &PauliString::support)
      .def("__str__", &PauliString::str)
      .def("__repr__", [](const PauliString& p) { return "PauliString('" + p.str() + "')"; })
      .def(py::self == py::self);

  py::class_<Circuit>(m, "Circuit")
      .def(py::init<std::size_t, InputKind>(), py::arg("num_qubits"), py::arg("input") = InputKind::kAllZero)
      .def_static("parse", [](const std::string& text) { return parse_circuit(text); })
      .def("serialize", &serialize_circuit)
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def_property_readonly("input", &Circuit::input)
      .def_property_readonly("rotation_count", &Circuit::rotation_count)
      .def("census", &Circuit::census)
      .def("inverse", &Circuit::inverse)
      .def("append_gate", [](Circuit& c, const std::string& name, std::size_t q0, std::size_t q1) {
             c.append(gate_kind(name), q0, q1);
           }, py::arg("name"), py::arg("q0"), py::arg("q1") = 0)
      .def("append_rotation", &Circuit::append_rotation, py::arg("generator"), py::arg("angle"))
      .def("__len__", &Circuit::size);

  m.def("normalize_rotations", &normalize_rotations);
  m.def("is_clifford", &is_clifford);
  m.def("statevector_expectation", &statevector_expectation, py::arg("circuit"), py::arg("observable"));

  py::enum_<Family>(m, "Family")
      .value("MIRROR_2D", Family::kMirror2D)
      .value("MIRROR_1D", Family::kMirror1D)
      .value("TROTTER", Family::kTrotter);
  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("family", &ExperimentSpec::family)
      .def_readwrite("num_qubits", &ExperimentSpec::num_qubits)
      .def_readwrite("layers", &ExperimentSpec::layers)
      .def_readwrite("theta", &ExperimentSpec::theta)
      .def_readwrite("seed", &ExperimentSpec::seed)
      .def_readwrite("observable", &ExperimentSpec::observable)
      .def_readwrite("p_single", &ExperimentSpec::p_single)
      .def_readwrite("p_cz", &ExperimentSpec::p_cz)
      .def_readwrite("p_rx", &ExperimentSpec::p_rx)
      .def_readwrite("coupling", &ExperimentSpec::coupling);
  m.def("generate_circuit", &generate_circuit);
  m.def("default_observable", &default_observable);

  py::class_<TruncationPolicy>(m, "TruncationPolicy")
      .def_static("order", &TruncationPolicy::order, py::arg("k_t"))
      .def_static("coefficient", &TruncationPolicy::coefficient, py::arg("epsilon"))
      .def_static("hybrid", &TruncationPolicy::hybrid, py::arg("k_t"), py::arg("epsilon"))
      .def_static("unbounded", &TruncationPolicy::unbounded)
      .def_readonly("max_order", &TruncationPolicy::max_order)
      .def_readonly("epsilon", &TruncationPolicy::epsilon);

  py::class_<PauliPath>(m, "PauliPath")
      .def_readonly("path_id", &PauliPath::path_id)
      .def_property_readonly("id", &PauliPath::id_string)
      .def_property_readonly("coefficient", [](const PauliPath& p) { return p.coeff.value; })
      .def_property_readonly("order", [](const PauliPath& p) { return p.coeff.order; })
      .def_property_readonly("sin_indices", [](const PauliPath& p) { return p.coeff.sin_indices; })
      .def_readonly("frame", &PauliPath::frame)
      .def_readonly("ideal_expectation", &PauliPath::ideal_expectation);

  py::class_<EnumerationStats>(m, "EnumerationStats")
      .def_readonly("completed", &EnumerationStats::completed)
      .def_readonly("emitted", &EnumerationStats::emitted)
      .def_readonly("zero_expectation", &EnumerationStats::zero_expectation)
      .def_readonly("pruned_order", &EnumerationStats::pruned_order)
      .def_readonly("pruned_coefficient", &EnumerationStats::pruned_coefficient)
      .def_readonly("coefficient_power", &EnumerationStats::coefficient_power);
  py::class_<Enumeration>(m, "Enumeration")
      .def_readonly("paths", &Enumeration::paths)
      .def_readonly("stats", &Enumeration::stats);
  m.def("enumerate_paths", &enumerate_paths, py::arg("circuit"), py::arg("observable"), py::arg("policy"),
        py::arg("keep_zero") = false, py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("classical_cpt_estimate", [](const std::vector<PauliPath>& p) { return classical_cpt_estimate(p); });

  py::enum_<SamplingDistribution>(m, "SamplingDistribution")
      .value("D_TILDE", SamplingDistribution::kDTilde)
      .value("D_POSTSELECTED", SamplingDistribution::kDPostselected);
  py::class_<SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_readwrite("target_unique_paths", &SamplerConfig::target_unique_paths)
      .def_readwrite("max_attempts", &SamplerConfig::max_attempts)
      .def_readwrite("distribution", &SamplerConfig::distribution)
      .def_readwrite("rng_seed", &SamplerConfig::rng_seed)
      .def_readwrite("workers", &SamplerConfig::workers);
  py::class_<SamplingReport>(m, "SamplingReport")
      .def_readonly("attempts", &SamplingReport::attempts)
      .def_readonly("accepted", &SamplingReport::accepted)
      .def_readonly("unique", &SamplingReport::unique)
      .def_readonly("saturated", &SamplingReport::saturated);
  py::class_<SampledEnsemble>(m, "SampledEnsemble")
      .def_readonly("paths", &SampledEnsemble::paths)
      .def_readonly("report", &SampledEnsemble::report);
  m.def("build_ensemble", &build_ensemble, py::call_guard<py::gil_scoped_release>());

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("noiseless", &NoiseModel::noiseless)
      .def_static("depolarizing", &NoiseModel::depolarizing, py::arg("lambda2") = 5e-3, py::arg("lambda1") = 2e-4,
                  py::arg("readout") = 1e-2)
      .def_readwrite("readout", &NoiseModel::readout)
      .def("is_noiseless", &NoiseModel::is_noiseless);

  py::class_<ExecutionPlan>(m, "ExecutionPlan")
      .def(py::init<>())
      .def_readwrite("num_twirls", &ExecutionPlan::num_twirls)
      .def_readwrite("shots_per_twirl", &ExecutionPlan::shots_per_twirl)
      .def_readwrite("seed", &ExecutionPlan::seed)
      .def_readwrite("interleave", &ExecutionPlan::interleave)
      .def_readwrite("infinite_shots", &ExecutionPlan::infinite_shots);
  py::class_<NoisyEstimate>(m, "NoisyEstimate")
      .def(py::init([](double mean, double std_error, std::size_t shots) {
             return NoisyEstimate{mean, std_error, shots};
           }), py::arg("mean"), py::arg("std_error") = 0.0, py::arg("total_shots") = 0)
      .def_readonly("mean", &NoisyEstimate::mean)
      .def_readonly("std_error", &NoisyEstimate::std_error)
      .def_readonly("total_shots", &NoisyEstimate::total_shots);
  py::class_<Job>(m, "Job").def_readonly("circuit", &Job::circuit).def_readonly("observable", &Job::observable);
  py::class_<JobResult>(m, "JobResult")
      .def(py::init([](const NoisyEstimate& e) { return JobResult{e, JobErrorKind::kNone, ""}; }))
      .def_static("failure", [](const std::string& why) {
        return JobResult{std::nullopt, JobErrorKind::kCapability, why};
      })
      .def_readonly("estimate", &JobResult::estimate)
      .def_readonly("error", &JobResult::error)
      .def("ok", &JobResult::ok);

  py::class_<Backend, PyBackend>(m, "Backend")
      .def(py::init<>())
      .def("name", &Backend::name)
      .def("submit_batch", [](const Backend& b, const std::vector<Job>& jobs, const ExecutionPlan& plan) {
        return b.submit_batch(jobs, plan);
      });
  py::class_<SimulatorOptions>(m, "SimulatorOptions")
      .def(py::init<>())
      .def_readwrite("dense_qubit_cap", &SimulatorOptions::dense_qubit_cap)
      .def_readwrite("workers", &SimulatorOptions::workers);
  py::class_<SimulatorBackend, Backend>(m, "SimulatorBackend")
      .def(py::init<NoiseModel, SimulatorOptions>(), py::arg("noise"), py::arg("options") = SimulatorOptions{})
      .def("estimate", &SimulatorBackend::estimate, py::arg("circuit"), py::arg("observable"), py::arg("plan"),
           py::arg("stream") = 0, py::call_guard<py::gil_scoped_release>());

  py::enum_<EtaMethod>(m, "EtaMethod")
      .value("MEDIAN", EtaMethod::kMedian)
      .value("WEIGHTED_AVERAGE", EtaMethod::kWeightedAverage)
      .value("BALANCE", EtaMethod::kBalance);
  py::class_<EnsembleRecord>(m, "EnsembleRecord")
      .def(py::init(&make_record), py::arg("path"), py::arg("noisy"))
      .def_readonly("path", &EnsembleRecord::path)
      .def_readonly("ideal", &EnsembleRecord::ideal)
      .def_readonly("noisy", &EnsembleRecord::noisy)
      .def_readonly("eta", &EnsembleRecord::eta)
      .def_readonly("out_of_range", &EnsembleRecord::out_of_range);
  m.def("eta_median", [](const std::vector<EnsembleRecord>& r) { return eta_median(r); });
  m.def("eta_weighted_average", [](const std::vector<EnsembleRecord>& r) { return eta_weighted_average(r); });
  m.def("eta_balance", [](const std::vector<EnsembleRecord>& r) { return eta_balance(r); });

  py::class_<EtaChoice>(m, "EtaChoice")
      .def_readonly("method", &EtaChoice::method)
      .def_readonly("value", &EtaChoice::value)
      .def_readonly("fell_back", &EtaChoice::fell_back)
      .def_readonly("empty", &EtaChoice::empty);
  py::class_<VarianceBound>(m, "VarianceBound")
      .def_readonly("gamma", &VarianceBound::gamma)
      .def_readonly("p_kt", &VarianceBound::p_kt)
      .def_readonly("shots", &VarianceBound::shots)
      .def_readonly("bound", &VarianceBound::bound)
      .def_readonly("exact", &VarianceBound::exact);
  py::class_<CombinatorialBias>(m, "CombinatorialBias")
      .def_readonly("exact_sum", &CombinatorialBias::exact_sum)
      .def_readonly("closed_form", &CombinatorialBias::closed_form);
  py::class_<EtaBias>(m, "EtaBias")
      .def_readonly("worst_case", &EtaBias::worst_case)
      .def_readonly("average_case", &EtaBias::average_case)
      .def_readonly("valid", &EtaBias::valid);
  m.def("bias_bound_combinatorial", &bias_bound_combinatorial, py::arg("k"), py::arg("k_t"), py::arg("theta_star"),
        py::arg("eta"), py::arg("eta_star"));
  m.def("bem_combine", [](double target, const std::vector<double>& ideal, const std::vector<double>& mitigated,
                          const std::vector<double>& g) { return bem_combine(target, ideal, mitigated, g); });

  py::class_<QueppOptions>(m, "QueppOptions")
      .def(py::init<>())
      .def_readwrite("eta_method", &QueppOptions::eta_method)
      .def_readwrite("num_rotations", &QueppOptions::num_rotations)
      .def_readwrite("theta_star", &QueppOptions::theta_star)
      .def_readwrite("k_t", &QueppOptions::k_t)
      .def_readwrite("p_kt", &QueppOptions::p_kt);
  py::class_<QueppResult>(m, "QueppResult")
      .def_readonly("classical_part", &QueppResult::classical_part)
      .def_readonly("noisy_target", &QueppResult::noisy_target)
      .def_readonly("noisy_ensemble_part", &QueppResult::noisy_ensemble_part)
      .def_readonly("residual", &QueppResult::residual)
      .def_readonly("eta", &QueppResult::eta)
      .def_readonly("boosted", &QueppResult::boosted)
      .def_readonly("std_error", &QueppResult::std_error)
      .def_readonly("mitigated_target", &QueppResult::mitigated_target)
      .def_readonly("delta_m", &QueppResult::delta_m)
      .def_readonly("variance", &QueppResult::variance)
      .def_readonly("bias_combinatorial", &QueppResult::bias_combinatorial)
      .def_readonly("bias_eta", &QueppResult::bias_eta)
      .def_readonly("ensemble_size", &QueppResult::ensemble_size);
  py::class_<ProtocolRun>(m, "ProtocolRun")
      .def_readonly("result", &ProtocolRun::result)
      .def_readonly("records", &ProtocolRun::records)
      .def_readonly("target", &ProtocolRun::target)
      .def_readonly("skipped", &ProtocolRun::skipped);
  m.def("run_quepp",
        [](const Circuit& c, const PauliString& o, const std::vector<PauliPath>& ensemble, const Backend& backend,
           const ExecutionPlan& plan, const QueppOptions& options, bool allow_partial) {
          return run_quepp(c, o, ensemble, backend, plan, options, allow_partial);
        },
        py::arg("circuit"), py::arg("observable"), py::arg("ensemble"), py::arg("backend"), py::arg("plan"),
        py::arg("options") = QueppOptions{}, py::arg("allow_partial") = false,
        py::call_guard<py::gil_scoped_release>());
}

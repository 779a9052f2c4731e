#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

#include "harvestsim/config.hpp"
#include "harvestsim/electromech.hpp"
#include "harvestsim/geartrain.hpp"
#include "harvestsim/io.hpp"
#include "harvestsim/kinematics.hpp"
#include "harvestsim/simulate.hpp"
#include "harvestsim/version.hpp"

#include <sstream>

namespace py = pybind11;
using namespace harvestsim;

namespace {

Point2 to_point(const std::pair<double, double>& p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_harvestsim, m) {
  m.doc() = "Gear-and-generator biomechanical energy harvester design toolkit";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "ToolkitError");

  // kinematics -------------------------------------------------------------
  py::class_<Point2>(m, "Point2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Point2{x, y}; }), py::arg("x"),
           py::arg("y"))
      .def_readwrite("x", &Point2::x)
      .def_readwrite("y", &Point2::y);

  py::class_<LandmarkFrame>(m, "LandmarkFrame")
      .def(py::init<>())
      .def_readwrite("t", &LandmarkFrame::t)
      .def_readwrite("pos", &LandmarkFrame::pos)
      .def_readwrite("vis", &LandmarkFrame::vis);

  py::class_<LandmarkSeries>(m, "LandmarkSeries")
      .def(py::init<>())
      .def_readwrite("sample_rate_hz", &LandmarkSeries::sample_rate_hz)
      .def_readwrite("names", &LandmarkSeries::names)
      .def_readwrite("frames", &LandmarkSeries::frames)
      .def("index_of", &LandmarkSeries::index_of);

  py::class_<JointDefinition>(m, "JointDefinition")
      .def(py::init([](std::string name, std::string proximal, std::string vertex,
                       std::string distal) {
             return JointDefinition{std::move(name), std::move(proximal),
                                    std::move(vertex), std::move(distal)};
           }),
           py::arg("name"), py::arg("proximal"), py::arg("vertex"), py::arg("distal"))
      .def_readwrite("name", &JointDefinition::name)
      .def_readwrite("proximal", &JointDefinition::proximal)
      .def_readwrite("vertex", &JointDefinition::vertex)
      .def_readwrite("distal", &JointDefinition::distal);

  py::class_<AngleSample>(m, "AngleSample")
      .def(py::init([](double t, double theta) { return AngleSample{t, theta}; }),
           py::arg("t"), py::arg("theta"))
      .def_readwrite("t", &AngleSample::t)
      .def_readwrite("theta", &AngleSample::theta);

  py::class_<AngleSeries>(m, "AngleSeries")
      .def(py::init<>())
      .def(py::init([](std::string joint, const std::vector<double>& t,
                       const std::vector<double>& theta) {
             if (t.size() != theta.size()) {
               throw ConfigError("AngleSeries: t and theta lengths differ");
             }
             AngleSeries s;
             s.joint = std::move(joint);
             s.samples.reserve(t.size());
             for (std::size_t i = 0; i < t.size(); ++i) s.samples.push_back({t[i], theta[i]});
             return s;
           }),
           py::arg("joint"), py::arg("t"), py::arg("theta"))
      .def_readwrite("joint", &AngleSeries::joint)
      .def_readwrite("samples", &AngleSeries::samples);

  py::class_<OmegaSample>(m, "OmegaSample")
      .def(py::init([](double t, double omega) { return OmegaSample{t, omega}; }),
           py::arg("t"), py::arg("omega"))
      .def_readwrite("t", &OmegaSample::t)
      .def_readwrite("omega", &OmegaSample::omega);

  py::class_<OmegaSeries>(m, "OmegaSeries")
      .def(py::init<>())
      .def_readwrite("joint", &OmegaSeries::joint)
      .def_readwrite("samples", &OmegaSeries::samples);

  py::enum_<Gait>(m, "Gait")
      .value("walking", Gait::Walking)
      .value("running", Gait::Running);

  py::class_<ComparisonInput>(m, "ComparisonInput")
      .def(py::init([](std::string label, double speed_kmh, Gait gait, OmegaSeries omega) {
             return ComparisonInput{std::move(label), speed_kmh, gait, std::move(omega)};
           }),
           py::arg("label"), py::arg("speed_kmh"), py::arg("gait"), py::arg("omega"))
      .def_readwrite("label", &ComparisonInput::label)
      .def_readwrite("speed_kmh", &ComparisonInput::speed_kmh)
      .def_readwrite("gait", &ComparisonInput::gait)
      .def_readwrite("omega", &ComparisonInput::omega);

  py::class_<ComparisonRow>(m, "ComparisonRow")
      .def_readonly("joint", &ComparisonRow::joint)
      .def_readonly("gait", &ComparisonRow::gait)
      .def_readonly("speed_kmh", &ComparisonRow::speed_kmh)
      .def_readonly("rms_rad_s", &ComparisonRow::rms_rad_s);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("rows", &ComparisonReport::rows)
      .def_readonly("best_per_speed", &ComparisonReport::best_per_speed)
      .def_readonly("best_overall", &ComparisonReport::best_overall);

  m.def("joint_angle",
        [](const std::pair<double, double>& a, const std::pair<double, double>& b,
           const std::pair<double, double>& c) {
          return joint_angle(to_point(a), to_point(b), to_point(c));
        },
        py::arg("a"), py::arg("b"), py::arg("c"),
        "Interior angle at vertex b between rays b->a and b->c, in [0, pi].");
  m.def("angle_series", &angle_series, py::arg("series"), py::arg("joint"),
        py::arg("visibility_threshold") = kDefaultVisibilityThreshold);
  m.def("angular_velocity", &angular_velocity, py::arg("angles"),
        py::arg("smoothing_window"));
  m.def("rms", &rms, py::arg("omega"));
  m.def("joint_comparison_report", &joint_comparison_report, py::arg("inputs"));
  m.def("parse_landmark_csv", [](const std::string& text) {
    std::istringstream in(text);
    return parse_landmark_series(in, "<string>");
  });

  // geartrain --------------------------------------------------------------
  py::class_<GearStage>(m, "GearStage")
      .def(py::init([](std::string id, double module_mm, int teeth_large, int teeth_small) {
             GearStage stage{std::move(id), module_mm, teeth_large, teeth_small};
             validate_stage_fields(stage);
             return stage;
           }),
           py::arg("id"), py::arg("module_mm"), py::arg("teeth_large"),
           py::arg("teeth_small"))
      .def_readwrite("id", &GearStage::id)
      .def_readwrite("module_mm", &GearStage::module_mm)
      .def_readwrite("teeth_large", &GearStage::teeth_large)
      .def_readwrite("teeth_small", &GearStage::teeth_small);

  py::enum_<GearSide>(m, "GearSide")
      .value("large", GearSide::Large)
      .value("small", GearSide::Small);

  py::class_<GearTrain>(m, "GearTrain")
      .def(py::init<>())
      .def(py::init([](std::vector<GearStage> stages) {
             return GearTrain{std::move(stages)};
           }),
           py::arg("stages"))
      .def_readwrite("stages", &GearTrain::stages);

  py::enum_<CheckStatus>(m, "CheckStatus")
      .value("passed", CheckStatus::Pass)
      .value("warn", CheckStatus::Warn)
      .value("fail", CheckStatus::Fail);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("status", &CheckResult::status)
      .def_readonly("detail", &CheckResult::detail);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("all_passed", &ValidationReport::all_passed)
      .def("has_warnings", &ValidationReport::has_warnings);

  m.def("pitch_diameter", &pitch_diameter, py::arg("stage"), py::arg("side"));
  m.def("mesh_center_distance", &mesh_center_distance, py::arg("upstream"),
        py::arg("downstream"));
  m.def("overall_ratio", &overall_ratio, py::arg("train"));
  m.def("validate_train", &validate_train, py::arg("train"),
        py::arg("expected_center_distances_mm") = std::vector<std::optional<double>>{},
        py::arg("expected_ratio") = std::nullopt);

  // electromech ------------------------------------------------------------
  py::class_<GeneratorParams>(m, "GeneratorParams")
      .def(py::init([](double k_g, double r_internal_ohm, double ratio) {
             return GeneratorParams{k_g, r_internal_ohm, ratio};
           }),
           py::arg("k_g"), py::arg("r_internal_ohm"), py::arg("ratio"))
      .def_readwrite("k_g", &GeneratorParams::k_g)
      .def_readwrite("r_internal_ohm", &GeneratorParams::r_internal_ohm)
      .def_readwrite("ratio", &GeneratorParams::ratio);

  py::class_<LoadSweepRecord>(m, "LoadSweepRecord")
      .def(py::init([](double r_load_ohm, double v_rms, double power_w) {
             return LoadSweepRecord{r_load_ohm, v_rms, power_w};
           }),
           py::arg("r_load_ohm"), py::arg("v_rms"), py::arg("power_w") = 0.0)
      .def_readwrite("r_load_ohm", &LoadSweepRecord::r_load_ohm)
      .def_readwrite("v_rms", &LoadSweepRecord::v_rms)
      .def_readwrite("power_w", &LoadSweepRecord::power_w);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("emf_rms", &FitResult::emf_rms)
      .def_readonly("r_internal_ohm", &FitResult::r_internal_ohm)
      .def_readonly("residual_rms", &FitResult::residual_rms);

  py::class_<PowerSplit>(m, "PowerSplit")
      .def_readonly("p_out", &PowerSplit::p_out)
      .def_readonly("p_internal", &PowerSplit::p_internal)
      .def_readonly("p_total", &PowerSplit::p_total);

  py::class_<OptimalLoad>(m, "OptimalLoad")
      .def_readonly("analytic_ohm", &OptimalLoad::analytic_ohm)
      .def_readonly("grid_ohm", &OptimalLoad::grid_ohm);

  m.def("output_speed", &output_speed, py::arg("omega_arm"), py::arg("ratio"));
  m.def("emf", &emf, py::arg("params"), py::arg("omega_arm"));
  m.def("load_current", &load_current, py::arg("params"), py::arg("omega_arm"),
        py::arg("r_load_ohm"));
  m.def("power_split", &power_split, py::arg("current"), py::arg("r_internal_ohm"),
        py::arg("r_load_ohm"));
  m.def("power_from_vrms", &power_from_vrms, py::arg("v_rms"), py::arg("r_load_ohm"));
  m.def("efficiency", &efficiency, py::arg("p_out"), py::arg("p_total"));
  m.def("fit_sweep", &fit_sweep, py::arg("records"));
  m.def("optimal_load",
        py::overload_cast<double, const std::vector<double>&>(&optimal_load),
        py::arg("r_internal_ohm"), py::arg("grid_ohm"));
  m.def("optimal_load",
        py::overload_cast<const GeneratorParams&, const std::vector<double>&>(&optimal_load),
        py::arg("params"), py::arg("grid_ohm"));
  m.def("optimal_load",
        py::overload_cast<const FitResult&, const std::vector<double>&>(&optimal_load),
        py::arg("fit"), py::arg("grid_ohm"));
  m.def("optimal_measured_load", &optimal_measured_load, py::arg("records"));

  // simulate ---------------------------------------------------------------
  py::class_<SwingProfile>(m, "SwingProfile")
      .def(py::init([](double angle_min_deg, double angle_max_deg, double cadence_hz,
                       double duration_s, double sample_rate_hz) {
             SwingProfile p{angle_min_deg, angle_max_deg, cadence_hz, duration_s,
                            sample_rate_hz};
             validate_profile(p);
             return p;
           }),
           py::arg("angle_min_deg"), py::arg("angle_max_deg"), py::arg("cadence_hz"),
           py::arg("duration_s"), py::arg("sample_rate_hz"))
      .def_readwrite("angle_min_deg", &SwingProfile::angle_min_deg)
      .def_readwrite("angle_max_deg", &SwingProfile::angle_max_deg)
      .def_readwrite("cadence_hz", &SwingProfile::cadence_hz)
      .def_readwrite("duration_s", &SwingProfile::duration_s)
      .def_readwrite("sample_rate_hz", &SwingProfile::sample_rate_hz);

  py::class_<CapacitorSpec>(m, "CapacitorSpec")
      .def(py::init([](double capacitance_f, double rated_voltage_v,
                       double initial_voltage_v) {
             CapacitorSpec c{capacitance_f, rated_voltage_v, initial_voltage_v};
             validate_capacitor(c);
             return c;
           }),
           py::arg("capacitance_f"), py::arg("rated_voltage_v"),
           py::arg("initial_voltage_v") = 0.0)
      .def_readwrite("capacitance_f", &CapacitorSpec::capacitance_f)
      .def_readwrite("rated_voltage_v", &CapacitorSpec::rated_voltage_v)
      .def_readwrite("initial_voltage_v", &CapacitorSpec::initial_voltage_v);

  py::class_<ChainSample>(m, "ChainSample")
      .def_readonly("t", &ChainSample::t)
      .def_readonly("theta", &ChainSample::theta)
      .def_readonly("omega_arm", &ChainSample::omega_arm)
      .def_readonly("omega_gen", &ChainSample::omega_gen)
      .def_readonly("v", &ChainSample::v)
      .def_readonly("i", &ChainSample::i)
      .def_readonly("p_out", &ChainSample::p_out)
      .def_readonly("p_internal", &ChainSample::p_internal);

  py::class_<ChainTrace>(m, "ChainTrace")
      .def_readonly("samples", &ChainTrace::samples)
      .def_readonly("energy_out_j", &ChainTrace::energy_out_j)
      .def_readonly("energy_total_j", &ChainTrace::energy_total_j);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("records", &SweepResult::records)
      .def_readonly("argmax_index", &SweepResult::argmax_index);

  py::class_<CapacitorResult>(m, "CapacitorResult")
      .def_readonly("final_voltage_v", &CapacitorResult::final_voltage_v)
      .def_readonly("stored_energy_j", &CapacitorResult::stored_energy_j)
      .def_readonly("clamped", &CapacitorResult::clamped);

  m.def("synth_swing", &synth_swing, py::arg("profile"), py::arg("joint_name") = "swing");
  m.def("simulate_chain", &simulate_chain, py::arg("angles"), py::arg("ratio"),
        py::arg("params"), py::arg("r_load_ohm"));
  m.def("sweep_load", &sweep_load, py::arg("angles"), py::arg("ratio"), py::arg("params"),
        py::arg("grid_ohm"));
  m.def("simulate_capacitor", &simulate_capacitor, py::arg("source_power_w"),
        py::arg("cap"), py::arg("duration_s"));
  m.def("capacitor_energy", &capacitor_energy, py::arg("cap"), py::arg("voltage"));
}

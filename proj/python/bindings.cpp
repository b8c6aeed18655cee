#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scrub/cli.hpp"
#include "scrub/detect.hpp"
#include "scrub/error.hpp"
#include "scrub/ingest.hpp"
#include "scrub/mask.hpp"
#include "scrub/stats.hpp"

namespace py = pybind11;
using namespace scrub;

namespace {

py::dict finding_dict(const Finding& f) {
    py::dict d;
    d["detector"] = std::string(to_string(f.detector));
    d["category"] = std::string(to_string(f.category));
    d["severity"] = std::string(to_string(f.severity));
    d["begin"] = f.begin;
    d["end"] = f.end;
    d["matched"] = py::bytes(f.matched);
    return d;
}

std::vector<py::dict> scan(const std::string& text, const std::vector<std::string>& detectors, bool strict) {
    ScannerConfig cfg;
    cfg.pii.strict_patterns = strict;
    const Scanner scanner(std::move(cfg));
    std::set<Detector> wanted;
    for (const auto& d : detectors) wanted.insert(detector_from_string(d));
    if (detectors.empty()) wanted = {Detector::SECRETS, Detector::ENDPOINT, Detector::REGEX_PII};
    std::vector<py::dict> out;
    for (const auto& f : scanner.scan(text, Origin{Surface::WORKING_TREE, "<text>", "", "<text>"}, wanted)) {
        out.push_back(finding_dict(f));
    }
    return out;
}

py::dict summarize_values(const std::vector<double>& values) {
    const SummaryRow r = scrub::summarize("values", values);
    py::dict d;
    d["sum"] = r.sum;
    d["mean"] = r.mean;
    d["std"] = r.std;
    d["min"] = r.min;
    d["p10"] = r.p10;
    d["p25"] = r.p25;
    d["p50"] = r.p50;
    d["p75"] = r.p75;
    d["p90"] = r.p90;
    d["p95"] = r.p95;
    d["max"] = r.max;
    return d;
}

}  // namespace

PYBIND11_MODULE(_scrub, m) {
    m.doc() = "scrub core bindings";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "ScrubError", PyExc_RuntimeError);

    m.def("hash12", [](const py::bytes& salt, const py::bytes& value) {
        return hash12(std::string(salt), std::string(value));
    }, py::arg("salt"), py::arg("value"));

    m.def("mask_for", [](const std::string& category, const std::string& value, const py::bytes& salt,
                         const std::string& label) {
        return mask_for(category_from_string(category), value, Salt(std::string(salt)), label);
    }, py::arg("category"), py::arg("value"), py::arg("salt"), py::arg("label") = "name");

    m.def("safe_name", [](const std::string& url) { return safe_name(url); }, py::arg("url"));
    m.def("repo_only_name", [](const std::string& url) { return repo_only_name(url); }, py::arg("url"));

    m.def("scan", &scan, py::arg("text"), py::arg("detectors") = std::vector<std::string>{},
          py::arg("strict") = false, "Findings as dicts; spans are byte offsets into the UTF-8 text.");

    m.def("summarize", &summarize_values, py::arg("values"));

    m.def("funnel", [](const std::vector<std::string>& statuses) {
        std::vector<py::tuple> rows;
        for (const auto& r : scrub::funnel(statuses)) rows.push_back(py::make_tuple(r.status, r.count, r.percent));
        return rows;
    }, py::arg("statuses"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        int code;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out);
        }
        return py::make_tuple(code, out.str());
    }, py::arg("args"), "Runs one scrub command; returns (exit code, stdout text).");
}

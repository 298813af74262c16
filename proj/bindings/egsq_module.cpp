#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "egsq/fp.hpp"
#include "egsq/group_spec.hpp"
#include "egsq/predict.hpp"
#include "egsq/quotient.hpp"
#include "egsq/tree_aut.hpp"
#include "egsq/words.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

egsq::FpVector to_vector(std::uint32_t p, const std::vector<long long>& v) {
  return egsq::FpVector(p, v);
}

std::vector<egsq::FpVector> to_vectors(
    std::uint32_t p, const std::vector<std::vector<long long>>& vs) {
  std::vector<egsq::FpVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(to_vector(p, v));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "congruence quotients of groups generated by rooted and directed "
            "automorphisms of the p-adic tree";

  py::register_exception<egsq::LimitExceeded>(m, "LimitExceededError");

  py::class_<egsq::TreeAut>(m, "TreeAut")
      .def_static("identity", &egsq::TreeAut::identity, "p"_a, "depth"_a)
      .def_static("rooted", &egsq::TreeAut::rooted, "p"_a, "depth"_a,
                  "exponent"_a = 1)
      .def_static("decode", &egsq::TreeAut::decode, "p"_a, "depth"_a,
                  "digits"_a)
      .def_static(
          "from_sections",
          [](long long root_exponent, const std::vector<egsq::TreeAut>& parts) {
            return egsq::TreeAut::from_sections(root_exponent, parts);
          },
          "root_exponent"_a, "sections"_a)
      .def_property_readonly("p", &egsq::TreeAut::prime)
      .def_property_readonly("depth", &egsq::TreeAut::depth)
      .def("apply", &egsq::TreeAut::apply, "vertex"_a,
           "image of a vertex (digits 1..p)")
      .def("label",
           [](const egsq::TreeAut& g, const egsq::Vertex& u) {
             return static_cast<int>(g.label(u));
           },
           "vertex"_a)
      .def("inverse", &egsq::TreeAut::inverse)
      .def("order", &egsq::TreeAut::order)
      .def("is_identity", &egsq::TreeAut::is_identity)
      .def("in_level_stabilizer", &egsq::TreeAut::in_level_stabilizer, "k"_a)
      .def("section", &egsq::TreeAut::section, "vertex"_a)
      .def("sections", &egsq::TreeAut::sections)
      .def("restrict", &egsq::TreeAut::restrict_depth, "depth"_a)
      .def("encode", &egsq::TreeAut::encode)
      .def("__mul__", [](const egsq::TreeAut& f,
                         const egsq::TreeAut& g) { return f.compose(g); })
      .def("__pow__",
           [](const egsq::TreeAut& g, long long k) { return g.pow(k); })
      .def("__eq__", [](const egsq::TreeAut& f,
                        const egsq::TreeAut& g) { return f == g; })
      .def("__hash__",
           [](const egsq::TreeAut& g) {
             return py::hash(py::make_tuple(g.prime(), g.depth(), g.encode()));
           })
      .def("__repr__", [](const egsq::TreeAut& g) {
        return "TreeAut(p=" + std::to_string(g.prime()) +
               ", depth=" + std::to_string(g.depth()) + ", '" + g.encode() +
               "')";
      });

  m.def("conjugate", &egsq::conjugate, "g"_a, "h"_a,
        "h^-1 g h (apply h^-1 first)");
  m.def("commutator", &egsq::commutator, "g"_a, "h"_a);
  m.def(
      "directed_generator",
      [](std::uint32_t p, std::uint32_t depth, std::uint32_t path,
         const std::vector<long long>& e) {
        return egsq::directed_generator(depth, path, to_vector(p, e));
      },
      "p"_a, "depth"_a, "path"_a, "vector"_a);
  m.def("path_conjugator", &egsq::path_conjugator, "p"_a, "depth"_a, "path"_a);

  py::class_<egsq::GroupSpec>(m, "GroupSpec")
      .def(py::init([](std::uint32_t p,
                       const std::vector<std::vector<std::vector<long long>>>&
                           spaces) {
             std::vector<std::vector<egsq::FpVector>> converted;
             converted.reserve(spaces.size());
             for (const auto& space : spaces)
               converted.push_back(to_vectors(p, space));
             return egsq::GroupSpec(p, std::move(converted));
           }),
           "p"_a, "spaces"_a)
      .def_static("from_json", &egsq::GroupSpec::from_json, "text"_a)
      .def_static("load", &egsq::GroupSpec::load, "path"_a)
      .def_property_readonly("p", &egsq::GroupSpec::prime)
      .def("to_json", &egsq::GroupSpec::to_json)
      .def("classify",
           [](const egsq::GroupSpec& spec) {
             const auto cls = spec.classify();
             py::dict out;
             out["family"] = cls.family_name();
             out["periodic"] = cls.periodic;
             out["defining_sum"] =
                 cls.defining_sum ? py::cast(*cls.defining_sum)
                                  : py::none().cast<py::object>();
             return out;
           })
      .def("rooted_generator", &egsq::GroupSpec::rooted_generator, "depth"_a)
      .def("directed_generator", &egsq::GroupSpec::directed_generator,
           "depth"_a, "path"_a, "index"_a)
      .def(
          "evaluate",
          [](const egsq::GroupSpec& spec, const std::string& word,
             std::uint32_t depth) {
            return spec.evaluate(egsq::Word::parse(word), depth);
          },
          "word"_a, "depth"_a)
      .def("__repr__", [](const egsq::GroupSpec& spec) {
        return "GroupSpec(" + spec.to_json() + ")";
      });

  py::class_<egsq::QuotientGroup>(m, "QuotientGroup")
      .def_property_readonly("level", &egsq::QuotientGroup::level)
      .def("__len__", &egsq::QuotientGroup::size)
      .def_property_readonly("size", &egsq::QuotientGroup::size)
      .def("element", &egsq::QuotientGroup::element, "index"_a)
      .def("element_encoding", &egsq::QuotientGroup::element_encoding,
           "index"_a)
      .def("contains", &egsq::QuotientGroup::contains, "g"_a)
      .def("__contains__", &egsq::QuotientGroup::contains)
      .def("exponent", &egsq::QuotientGroup::exponent, "threads"_a = 1)
      .def("order_histogram", &egsq::QuotientGroup::order_histogram,
           "threads"_a = 1)
      .def("stabilizer_slice", &egsq::QuotientGroup::stabilizer_slice, "k"_a)
      .def_property_readonly("layer_count", &egsq::QuotientGroup::layer_count)
      .def_property_readonly("seconds",
                             &egsq::QuotientGroup::enumeration_seconds)
      .def_property_readonly("elements_per_second",
                             &egsq::QuotientGroup::elements_per_second);

  m.def(
      "enumerate_quotient",
      [](const egsq::GroupSpec& spec, std::uint32_t level,
         std::size_t max_elements, unsigned threads) {
        egsq::EnumerationLimits limits;
        limits.max_elements = max_elements;
        return egsq::enumerate_quotient(spec, level, limits, threads);
      },
      "spec"_a, "level"_a, "max_elements"_a = 2'000'000, "threads"_a = 1);

  m.def(
      "find_preimage",
      [](const egsq::GroupSpec& spec, std::uint32_t level,
         const std::vector<egsq::TreeAut>& targets,
         const std::vector<std::uint32_t>& mask,
         std::size_t max_elements) -> py::object {
        egsq::EnumerationLimits limits;
        limits.max_elements = max_elements;
        const auto word =
            egsq::find_preimage(spec, level, targets, mask, limits);
        if (!word) return py::none();
        return py::cast(word->str());
      },
      "spec"_a, "level"_a, "targets"_a, "mask"_a,
      "max_elements"_a = 2'000'000);

  m.def("predicted_exponent", &egsq::predicted_exponent, "spec"_a, "level"_a);
  m.def("predicted_level2_order", &egsq::predicted_level2_order, "spec"_a);
  m.def(
      "deep_witness_word",
      [](const egsq::GroupSpec& spec, std::uint32_t conjugate_index) {
        return egsq::deep_witness_word(spec, conjugate_index).str();
      },
      "spec"_a, "conjugate_index"_a = 0);
  m.def(
      "first_section_lift",
      [](const egsq::GroupSpec& spec, const std::string& h) {
        return egsq::first_section_lift(spec, egsq::Word::parse(h)).str();
      },
      "spec"_a, "h"_a);
  m.def(
      "rebalance_stabilizer_word",
      [](const egsq::GroupSpec& spec, const std::string& h) {
        return egsq::rebalance_stabilizer_word(spec, egsq::Word::parse(h))
            .str();
      },
      "spec"_a, "h"_a);

  m.def(
      "verify_report",
      [](const egsq::GroupSpec& spec, std::uint32_t max_level,
         std::uint32_t witness_depth, std::size_t max_elements,
         unsigned threads) {
        egsq::VerifyOptions options;
        options.max_level = max_level;
        options.witness_depth = witness_depth;
        options.limits.max_elements = max_elements;
        options.threads = threads;
        return egsq::verify_exponents(spec, options).to_json();
      },
      "spec"_a, "max_level"_a = 3, "witness_depth"_a = 0,
      "max_elements"_a = 2'000'000, "threads"_a = 1,
      "run the closed-form checks; returns the report as a JSON string");

  m.def(
      "fp_rank",
      [](const std::vector<std::vector<long long>>& rows, std::uint32_t p) {
        return egsq::fp_rank(to_vectors(p, rows));
      },
      "rows"_a, "p"_a);
  m.def(
      "bar_closure",
      [](const std::vector<std::vector<long long>>& vectors, std::uint32_t p) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& v : egsq::bar_closure(to_vectors(p, vectors), p))
          out.push_back(v.entries());
        return out;
      },
      "vectors"_a, "p"_a);
  m.def(
      "in_sum_zero_hyperplane",
      [](const std::vector<long long>& v, std::uint32_t p) {
        return egsq::in_sum_zero_hyperplane(to_vector(p, v));
      },
      "vector"_a, "p"_a);
}

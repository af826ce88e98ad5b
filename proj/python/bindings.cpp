/*
   Copyright 2026 The ShockHash Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <shockhash/errors.hpp>
#include <shockhash/experiments.hpp>
#include <shockhash/recsplit.hpp>
#include <shockhash/retrieval.hpp>

namespace py = pybind11;
using namespace shockhash;

namespace {

LeafMode mode_from(const std::string& name) {
    const auto m = parse_leaf_mode(name);
    if (!m) throw InvalidParameter("unknown leaf mode " + name);
    return *m;
}

py::bytes to_bytes(const std::vector<std::byte>& b) {
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

std::vector<HashedKey> hash_all(const std::vector<std::string>& keys) {
    std::vector<HashedKey> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) out[i] = master_hash(keys[i]);
    return out;
}

py::tuple fraction(const experiments::Fraction& f) { return py::make_tuple(f.num, f.den); }

}  // namespace

PYBIND11_MODULE(_shockhash, m) {
    m.doc() = "ShockHash-RS minimal perfect hashing";

    // translators are tried newest first, so the base class goes first
    const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<DuplicateKey>(m, "DuplicateKey", base.ptr());
    py::register_exception<HashCollision>(m, "HashCollision", base.ptr());
    py::register_exception<ConstructionFailure>(m, "ConstructionFailure", base.ptr());

    m.def("master_hash", [](const std::string& key) {
        const HashedKey k = master_hash(key);
        return py::make_tuple(k.hi, k.lo);
    }, py::arg("key"), "128-bit master hash as (hi, lo)");
    m.def("synthetic_keys", &synthetic_keys, py::arg("seed"), py::arg("count"));

    py::class_<Mphf>(m, "Mphf")
        .def_static(
            "build",
            [](const std::vector<std::string>& keys, unsigned leaf_size, std::uint32_t bucket_size,
               const std::string& mode, unsigned threads) {
                BuildConfig c;
                c.leaf_size = leaf_size;
                c.bucket_size = bucket_size;
                c.mode = mode_from(mode);
                c.threads = threads;
                py::gil_scoped_release release;
                return Mphf::build(keys, c);
            },
            py::arg("keys"), py::arg("leaf_size") = 30, py::arg("bucket_size") = 2000, py::arg("mode") = "rotate",
            py::arg("threads") = 1)
        .def_static("deserialize", [](const py::bytes& data) {
            const std::string s = data;
            return Mphf::deserialize(std::as_bytes(std::span(s.data(), s.size())));
        })
        .def("__call__", [](const Mphf& f, const std::string& key) { return f.query(key); }, py::arg("key"))
        .def("query", [](const Mphf& f, const std::string& key) { return f.query(key); }, py::arg("key"))
        .def("query_many", [](const Mphf& f, const std::vector<std::string>& keys) {
            std::vector<std::uint64_t> out(keys.size());
            for (std::size_t i = 0; i < keys.size(); ++i) out[i] = f.query(keys[i]);
            return out;
        })
        .def("serialize", [](const Mphf& f) { return to_bytes(f.serialize()); })
        .def("verify", [](const Mphf& f, const std::vector<std::string>& keys) {
            VerifyResult r;
            {
                py::gil_scoped_release release;
                r = f.verify(keys);
            }
            return py::make_tuple(r.ok, r.message);
        })
        .def("stats", [](const Mphf& f) {
            const SpaceReport s = f.stats();
            py::dict d;
            d["keys"] = s.keys;
            d["header_bits"] = s.header_bits;
            d["offset_bits"] = s.offset_bits;
            d["seed_bits"] = s.seed_bits;
            d["retrieval_bits"] = s.retrieval_bits;
            d["total_bits"] = s.total_bits;
            d["bits_per_key"] = s.bits_per_key();
            return d;
        })
        .def("__len__", &Mphf::size)
        .def_property_readonly("leaf_size", &Mphf::leaf_size)
        .def_property_readonly("bucket_size", &Mphf::bucket_size)
        .def_property_readonly("mode", [](const Mphf& f) { return std::string(to_string(f.mode())); });

    py::class_<RibbonRetrieval>(m, "Retrieval")
        .def_static(
            "build",
            [](const std::vector<std::string>& keys, const std::vector<std::uint8_t>& bits, double epsilon) {
                return RibbonRetrieval::build(hash_all(keys), bits, epsilon);
            },
            py::arg("keys"), py::arg("bits"), py::arg("epsilon") = RibbonRetrieval::kDefaultEpsilon)
        .def("query", [](const RibbonRetrieval& r, const std::string& key) { return r.query(master_hash(key)); })
        .def_property_readonly("size_bits", &RibbonRetrieval::serialized_bits);

    auto ex = m.def_submodule("experiments", "exact and Monte-Carlo leaf statistics");
    ex.def("enumerate", [](unsigned n) {
        const experiments::EnumerationResult r = experiments::enumerate_outcomes(n);
        py::dict d;
        d["outcomes"] = r.outcomes;
        d["pseudoforest_probability"] = fraction(r.pseudoforest_probability());
        d["mean_orientations"] = fraction(r.mean_orientations());
        return d;
    }, py::arg("n"));
    ex.def("component_factor", &experiments::component_factor_exact, py::arg("n"));
    ex.def("bijection_probability", &experiments::bijection_probability, py::arg("n"));
    ex.def("filter_pass_bound", &experiments::filter_pass_bound, py::arg("n"));
    ex.def("mean_trials", [](unsigned n, const std::string& mode, std::uint64_t reps, std::uint64_t seed) {
        experiments::TrialMode t{};
        if (!experiments::parse_trial_mode(mode, t)) throw InvalidParameter("unknown trial mode " + mode);
        return experiments::trial_statistics(n, t, reps, seed).mean_seed;
    }, py::arg("n"), py::arg("mode"), py::arg("reps") = 1000, py::arg("seed") = 1);
}

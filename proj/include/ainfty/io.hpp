#pragma once

#include "ainfty/generate.hpp"
#include "ainfty/twisted.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace ainfty::io {

using nlohmann::json;

constexpr int format_version = 1;

template <class K>
std::string field_tag();
template <>
inline std::string field_tag<Rational>() { return "q"; }
template <>
inline std::string field_tag<Fp>() { return "p:" + std::to_string(Fp::modulus()); }

template <class K>
void check_field_tag(const json& j)
{
    std::string tag = j.at("field").get<std::string>();
    if (tag != field_tag<K>())
        throw std::invalid_argument("file was written for field \"" + tag + "\", expected \"" +
                                    field_tag<K>() + "\"");
}

inline void check_kind(const json& j, const std::string& kind)
{
    if (!j.is_object() || !j.contains("kind") || j.at("kind").get<std::string>() != kind)
        throw std::invalid_argument("expected a \"" + kind + "\" document");
    if (j.value("format_version", 0) != format_version)
        throw std::invalid_argument("unsupported format_version");
}

/* ---- spaces, matrices, elements ---- */

inline json space_to_json(const GradedSpace& s)
{
    json labels = json::array();
    for (Degree d = s.lo(); d <= s.hi(); ++d)
        labels.push_back(s.labels_at(d));
    return json{{"lo", s.lo()}, {"labels", labels}};
}

inline GradedSpace space_from_json(const json& j)
{
    std::vector<std::vector<std::string>> labels;
    for (const auto& row : j.at("labels"))
        labels.push_back(row.get<std::vector<std::string>>());
    return GradedSpace(j.at("lo").get<Degree>(), std::move(labels));
}

template <class K>
json matrix_to_json(const Mat<K>& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(field_traits<K>::str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class K>
Mat<K> matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols)
{
    if (static_cast<Eigen::Index>(j.size()) != rows)
        throw std::invalid_argument("matrix has wrong row count");
    Mat<K> m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument("matrix has wrong column count");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = field_traits<K>::parse(row.at(static_cast<size_t>(c)).get<std::string>());
    }
    return m;
}

template <class K>
json elem_to_json(const HomElem<K>& e)
{
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < e.coeffs.size(); ++i)
        if (!(e.coeffs[i] == K(0)))
            coeffs.push_back(json::array({i, field_traits<K>::str(e.coeffs[i])}));
    return json{{"degree", e.deg}, {"coeffs", coeffs}};
}

template <class K>
HomElem<K> elem_from_json(const json& j, const GradedSpace& space)
{
    HomElem<K> e = HomElem<K>::zero(space, j.at("degree").get<Degree>());
    for (const auto& pair : j.at("coeffs")) {
        Eigen::Index i = pair.at(0).get<Eigen::Index>();
        if (i < 0 || i >= e.coeffs.size())
            throw std::invalid_argument("element coefficient index out of range");
        e.coeffs[i] = field_traits<K>::parse(pair.at(1).get<std::string>());
    }
    return e;
}

template <class K>
json graded_map_to_json(const GradedMap<K>& m)
{
    json blocks = json::object();
    for (const auto& [d, b] : m.blocks())
        blocks[std::to_string(d)] = matrix_to_json(b);
    return json{{"degree", m.degree()}, {"blocks", blocks}};
}

template <class K>
GradedMap<K> graded_map_from_json(const json& j, const GradedSpace& source, const GradedSpace& target)
{
    GradedMap<K> m(source, target, j.at("degree").get<Degree>());
    for (const auto& [key, block] : j.at("blocks").items()) {
        Degree d = std::stoi(key);
        m.set_block(d, matrix_from_json<K>(block, target.dim(d + m.degree()), source.dim(d)));
    }
    return m;
}

template <class K>
json multimap_to_json(const MultiMap<K>& m)
{
    json entries = json::array();
    for (const auto& [chain, value] : m.entries()) {
        json in = json::array();
        for (const BasisRef& r : chain)
            in.push_back(json::array({r.deg, r.idx}));
        entries.push_back(json{{"in", in}, {"out", elem_to_json(value)}});
    }
    return json{{"arity", m.arity()}, {"degree", m.degree()}, {"entries", entries}};
}

template <class K>
MultiMap<K> multimap_from_json(const json& j, std::vector<GradedSpace> sources, GradedSpace target)
{
    MultiMap<K> m(std::move(sources), std::move(target), j.at("degree").get<Degree>());
    if (j.at("arity").get<int>() != m.arity())
        throw std::invalid_argument("product table arity mismatch");
    for (const auto& entry : j.at("entries")) {
        typename MultiMap<K>::Chain chain;
        for (const auto& r : entry.at("in"))
            chain.push_back({r.at(0).get<Degree>(), r.at(1).get<int>()});
        m.add_entry(chain, elem_from_json<K>(entry.at("out"), m.target()));
    }
    return m;
}

/* ---- categories ---- */

template <class K>
json category_to_json(const AInftyCategory<K>& C)
{
    json homs = json::array();
    for (const auto& [pair, space] : C.homs())
        if (space.total_dim() > 0)
            homs.push_back(json{{"from", C.object_label(pair.first)},
                                {"to", C.object_label(pair.second)},
                                {"space", space_to_json(space)}});
    json products = json::array();
    for (const auto& [chain, table] : C.products()) {
        json labels = json::array();
        for (int o : chain)
            labels.push_back(C.object_label(o));
        products.push_back(json{{"chain", labels}, {"table", multimap_to_json(table)}});
    }
    json units = json::array();
    for (const auto& [o, u] : C.units())
        units.push_back(json{{"object", C.object_label(o)}, {"value", elem_to_json(u)}});
    return json{{"format_version", format_version},
                {"kind", "category"},
                {"field", field_tag<K>()},
                {"presentation",
                 C.presentation() == Presentation::suspended ? "suspended" : "unsuspended"},
                {"arity_bound", C.arity_bound()},
                {"objects", C.objects()},
                {"homs", homs},
                {"products", products},
                {"units", units}};
}

template <class K>
AInftyCategory<K> category_from_json(const json& j)
{
    check_kind(j, "category");
    check_field_tag<K>(j);
    std::string pres = j.at("presentation").get<std::string>();
    if (pres != "suspended" && pres != "unsuspended")
        throw std::invalid_argument("unknown presentation tag");
    AInftyCategory<K> C(j.at("objects").get<std::vector<std::string>>(),
                        pres == "suspended" ? Presentation::suspended : Presentation::unsuspended,
                        j.at("arity_bound").get<int>());
    for (const auto& h : j.at("homs"))
        C.set_hom(C.object_index(h.at("from").get<std::string>()),
                  C.object_index(h.at("to").get<std::string>()),
                  space_from_json(h.at("space")));
    for (const auto& p : j.at("products")) {
        ObjectChain chain;
        for (const auto& label : p.at("chain"))
            chain.push_back(C.object_index(label.get<std::string>()));
        MultiMap<K> shape = C.zero_product(chain);
        C.set_product(chain,
                      multimap_from_json<K>(p.at("table"), shape.sources(), shape.target()));
    }
    for (const auto& u : j.at("units")) {
        int o = C.object_index(u.at("object").get<std::string>());
        C.set_unit(o, elem_from_json<K>(u.at("value"), C.hom(o, o)));
    }
    return C;
}

/* ---- SDR data ---- */

template <class K>
json sdr_to_json(const SDRData<K>& s)
{
    json pairs = json::array();
    for (const auto& [key, small] : s.small_homs) {
        if (s.big.hom(key.first, key.second).total_dim() == 0 && small.total_dim() == 0)
            continue;
        pairs.push_back(json{{"from", s.big.object_label(key.first)},
                             {"to", s.big.object_label(key.second)},
                             {"small", space_to_json(small)},
                             {"iota", graded_map_to_json(s.iota.at(key))},
                             {"pi", graded_map_to_json(s.pi.at(key))},
                             {"h", graded_map_to_json(s.h.at(key))}});
    }
    return json{{"format_version", format_version},
                {"kind", "sdr"},
                {"field", field_tag<K>()},
                {"category", category_to_json(s.big)},
                {"pairs", pairs}};
}

template <class K>
SDRData<K> sdr_from_json(const json& j)
{
    check_kind(j, "sdr");
    check_field_tag<K>(j);
    SDRData<K> s = SDRData<K>::make(category_from_json<K>(j.at("category")));
    for (const auto& p : j.at("pairs")) {
        int x = s.big.object_index(p.at("from").get<std::string>());
        int y = s.big.object_index(p.at("to").get<std::string>());
        auto key = std::make_pair(x, y);
        GradedSpace small = space_from_json(p.at("small"));
        const GradedSpace& big = s.big.hom(x, y);
        s.iota[key] = graded_map_from_json<K>(p.at("iota"), small, big);
        s.pi[key] = graded_map_from_json<K>(p.at("pi"), big, small);
        s.h[key] = graded_map_from_json<K>(p.at("h"), big, big);
        s.small_homs[key] = std::move(small);
    }
    // absent pairs with zero homs get the empty maps
    for (int x = 0; x < s.big.num_objects(); ++x)
        for (int y = 0; y < s.big.num_objects(); ++y) {
            auto key = std::make_pair(x, y);
            if (s.small_homs.count(key))
                continue;
            const GradedSpace& big = s.big.hom(x, y);
            s.small_homs[key] = GradedSpace();
            s.iota[key] = GradedMap<K>(GradedSpace(), big, 0);
            s.pi[key] = GradedMap<K>(big, GradedSpace(), 0);
            s.h[key] = GradedMap<K>(big, big, -1);
        }
    return s;
}

/* ---- functors ---- */

template <class K>
json functor_to_json(const AInftyFunctor<K>& F)
{
    json omap = json::array();
    for (int i = 0; i < F.source().num_objects(); ++i)
        omap.push_back(F.target().object_label(F.map_object(i)));
    json comps = json::array();
    for (const auto& [chain, table] : F.components()) {
        json labels = json::array();
        for (int o : chain)
            labels.push_back(F.source().object_label(o));
        comps.push_back(json{{"chain", labels}, {"table", multimap_to_json(table)}});
    }
    return json{{"format_version", format_version},
                {"kind", "functor"},
                {"field", field_tag<K>()},
                {"arity_bound", F.arity_bound()},
                {"source", category_to_json(F.source())},
                {"target", category_to_json(F.target())},
                {"object_map", omap},
                {"components", comps}};
}

template <class K>
AInftyFunctor<K> functor_from_json(const json& j)
{
    check_kind(j, "functor");
    check_field_tag<K>(j);
    AInftyCategory<K> source = category_from_json<K>(j.at("source"));
    AInftyCategory<K> target = category_from_json<K>(j.at("target"));
    std::vector<int> omap;
    for (const auto& label : j.at("object_map"))
        omap.push_back(target.object_index(label.get<std::string>()));
    AInftyFunctor<K> F(source, target, std::move(omap));
    F.set_arity_bound(j.at("arity_bound").get<int>());
    for (const auto& c : j.at("components")) {
        ObjectChain chain;
        for (const auto& label : c.at("chain"))
            chain.push_back(F.source().object_index(label.get<std::string>()));
        MultiMap<K> shape = F.zero_component(chain);
        F.set_component(chain,
                        multimap_from_json<K>(c.at("table"), shape.sources(), shape.target()));
    }
    return F;
}

/* ---- complexes ---- */

template <class K>
json complex_to_json(const ChainComplex<K>& X)
{
    json dims = json::array();
    for (Degree i = X.lo(); i <= X.hi(); ++i)
        dims.push_back(X.dim(i));
    json diffs = json::object();
    for (Degree i = X.lo(); i < X.hi(); ++i) {
        Mat<K> d = X.differential(i);
        if (!is_zero(d))
            diffs[std::to_string(i)] = matrix_to_json(d);
    }
    return json{{"name", X.name()}, {"lo", X.lo()}, {"dims", dims}, {"differentials", diffs}};
}

template <class K>
ChainComplex<K> complex_from_json(const json& j)
{
    ChainComplex<K> X(j.at("name").get<std::string>(), j.at("lo").get<Degree>(),
                      j.at("dims").get<std::vector<int>>());
    for (const auto& [key, m] : j.at("differentials").items()) {
        Degree i = std::stoi(key);
        X.set_differential(i, matrix_from_json<K>(m, X.dim(i + 1), X.dim(i)));
    }
    X.validate();
    return X;
}

template <class K>
json complexes_to_json(const std::vector<ChainComplex<K>>& items)
{
    json arr = json::array();
    for (const auto& X : items)
        arr.push_back(complex_to_json(X));
    return json{{"format_version", format_version},
                {"kind", "complexes"},
                {"field", field_tag<K>()},
                {"items", arr}};
}

template <class K>
std::vector<ChainComplex<K>> complexes_from_json(const json& j)
{
    check_kind(j, "complexes");
    check_field_tag<K>(j);
    std::vector<ChainComplex<K>> out;
    for (const auto& item : j.at("items"))
        out.push_back(complex_from_json<K>(item));
    return out;
}

/* ---- twisted complexes ---- */

inline json sum_object_to_json(const SumObject& o, const std::vector<std::string>& names)
{
    json arr = json::array();
    for (const auto& s : o.summands)
        arr.push_back(json::array({names[static_cast<size_t>(s.object)], s.shift}));
    return arr;
}

template <class K>
SumObject sum_object_from_json(const json& j, const AInftyCategory<K>& base)
{
    SumObject o;
    for (const auto& s : j)
        o.summands.push_back({base.object_index(s.at(0).get<std::string>()), s.at(1).get<int>()});
    return o;
}

template <class K>
json twisted_to_json(const Enlargement<K>& enl, const TwistedComplex<K>& t)
{
    return json{{"format_version", format_version},
                {"kind", "twisted"},
                {"field", field_tag<K>()},
                {"convention", convention_number(enl.convention())},
                {"category", category_to_json(enl.base())},
                {"base", sum_object_to_json(t.base, enl.base().objects())},
                {"phi", elem_to_json(t.phi)}};
}

/// Returns the enlargement context together with the parsed complex.
template <class K>
std::pair<Enlargement<K>, TwistedComplex<K>> twisted_from_json(const json& j)
{
    check_kind(j, "twisted");
    check_field_tag<K>(j);
    int a = j.at("convention").get<int>();
    if (a != 1 && a != 2)
        throw std::invalid_argument("convention must be 1 or 2");
    Enlargement<K> enl(category_from_json<K>(j.at("category")),
                       a == 1 ? ShiftConvention::c1 : ShiftConvention::c2);
    SumObject base = sum_object_from_json(j.at("base"), enl.base());
    HomElem<K> phi = elem_from_json<K>(j.at("phi"), enl.hom(base, base));
    return {std::move(enl), TwistedComplex<K>{std::move(base), std::move(phi)}};
}

template <class K>
json tw_morphism_to_json(const Enlargement<K>& enl, const TwMorphism<K>& m)
{
    return json{{"format_version", format_version},
                {"kind", "tw-morphism"},
                {"field", field_tag<K>()},
                {"convention", convention_number(enl.convention())},
                {"category", category_to_json(enl.base())},
                {"source_base", sum_object_to_json(m.source.base, enl.base().objects())},
                {"source_phi", elem_to_json(m.source.phi)},
                {"target_base", sum_object_to_json(m.target.base, enl.base().objects())},
                {"target_phi", elem_to_json(m.target.phi)},
                {"value", elem_to_json(m.value)}};
}

template <class K>
std::pair<Enlargement<K>, TwMorphism<K>> tw_morphism_from_json(const json& j)
{
    check_kind(j, "tw-morphism");
    check_field_tag<K>(j);
    int a = j.at("convention").get<int>();
    if (a != 1 && a != 2)
        throw std::invalid_argument("convention must be 1 or 2");
    Enlargement<K> enl(category_from_json<K>(j.at("category")),
                       a == 1 ? ShiftConvention::c1 : ShiftConvention::c2);
    SumObject sb = sum_object_from_json(j.at("source_base"), enl.base());
    SumObject tb = sum_object_from_json(j.at("target_base"), enl.base());
    TwistedComplex<K> src{sb, elem_from_json<K>(j.at("source_phi"), enl.hom(sb, sb))};
    TwistedComplex<K> tgt{tb, elem_from_json<K>(j.at("target_phi"), enl.hom(tb, tb))};
    HomElem<K> value = elem_from_json<K>(j.at("value"), enl.hom(sb, tb));
    return {std::move(enl), TwMorphism<K>{std::move(src), std::move(tgt), std::move(value)}};
}

/* ---- reports ---- */

inline json report_to_json(const std::string& command, const RelationReport& r)
{
    json viols = json::array();
    for (const auto& v : r.violations) {
        viols.push_back(json{{"n", v.n},
                             {"context", v.context},
                             {"objects", v.object_chain},
                             {"basis", v.basis_chain},
                             {"residual_degree", v.residual_degree},
                             {"residual", v.residual}});
    }
    return json{{"format_version", format_version},
                {"kind", "report"},
                {"command", command},
                {"ok", r.ok()},
                {"checked_arity", r.checked_arity},
                {"violations", viols}};
}

/* ---- files ---- */

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write \"" + path + "\"");
    out << dump(j);
}

inline json read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read \"" + path + "\"");
    json j;
    try {
        in >> j;
    }
    catch (const json::parse_error& e) {
        throw std::invalid_argument("parse error in \"" + path + "\": " + e.what());
    }
    return j;
}

}  // namespace ainfty::io

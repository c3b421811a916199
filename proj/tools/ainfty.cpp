// Command-line front end: load and verify structures, run transfers and the
// shift/HPT compatibility checks, build cones, and generate the seeded
// corpus.  Exit codes: 0 success, 1 check failure, 2 parse/config error.

#include "ainfty/io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

using namespace ainfty;

namespace {

struct Options {
    std::string field = "q";
    std::string input, output;
    int arity = 0;  // 0 = command default
    int convention = 2;
    int window = 1;
    bool cross = false;
    std::uint64_t seed = 1;
    int count = 10;
};

ShiftConvention convention_of(int a)
{
    if (a != 1 && a != 2)
        throw std::invalid_argument("--convention must be 1 or 2");
    return a == 1 ? ShiftConvention::c1 : ShiftConvention::c2;
}

void emit_report(const Options& opt, const std::string& command, const RelationReport& report)
{
    std::cout << command << ": " << report.summary() << "\n";
    if (!opt.output.empty())
        io::write_file(opt.output, io::report_to_json(command, report));
}

template <class K>
std::vector<SumObject> single_shift_objects(const AInftyCategory<K>& C, int max_shift)
{
    std::vector<SumObject> out;
    for (int i = 0; i < C.num_objects(); ++i)
        for (int r = 0; r <= max_shift; ++r)
            out.push_back(SumObject::single(i, r));
    return out;
}

template <class K>
int cmd_verify(const Options& opt)
{
    io::json j = io::read_file(opt.input);
    std::string kind = j.value("kind", "");
    if (kind == "category") {
        AInftyCategory<K> C = io::category_from_json<K>(j);
        int n = opt.arity ? opt.arity : std::min(5, 2 * C.arity_bound() - 1);
        RelationReport report = check_relations(C, n);
        emit_report(opt, "verify category", report);
        return report.ok() ? 0 : 1;
    }
    if (kind == "functor") {
        AInftyFunctor<K> F = io::functor_from_json<K>(j);
        int cap = 2 * std::min(F.source().arity_bound(), F.target().arity_bound()) - 1;
        int n = opt.arity ? opt.arity : std::min(5, cap);
        RelationReport sides = check_relations(F.source(), std::min(n, 2 * F.source().arity_bound() - 1));
        RelationReport target = check_relations(F.target(), std::min(n, 2 * F.target().arity_bound() - 1));
        RelationReport report = check_functor(F, n);
        report.violations.insert(report.violations.end(), sides.violations.begin(),
                                 sides.violations.end());
        report.violations.insert(report.violations.end(), target.violations.begin(),
                                 target.violations.end());
        emit_report(opt, "verify functor", report);
        return report.ok() ? 0 : 1;
    }
    if (kind == "sdr") {
        SDRData<K> s = io::sdr_from_json<K>(j);
        RelationReport report = check_sdr(s);
        emit_report(opt, "verify sdr", report);
        return report.ok() ? 0 : 1;
    }
    if (kind == "twisted") {
        auto [enl, t] = io::twisted_from_json<K>(j);
        RelationReport report = check_mc(enl, t);
        emit_report(opt, "verify twisted", report);
        return report.ok() ? 0 : 1;
    }
    throw std::invalid_argument("verify: unsupported document kind \"" + kind + "\"");
}

template <class K>
int cmd_transfer(const Options& opt)
{
    SDRData<K> s = io::sdr_from_json<K>(io::read_file(opt.input));
    RelationReport sdr_report = check_sdr(s);
    if (!sdr_report.ok()) {
        emit_report(opt, "transfer (input sdr)", sdr_report);
        return 1;
    }
    int arity = opt.arity ? opt.arity : std::min(5, 2 * s.big.arity_bound() - 1);
    TransferResult<K> out = transfer(s, arity, false);
    std::cout << "transfer: arity " << arity << ", "
              << out.small.products().size() << " product table(s)\n";
    if (!opt.output.empty())
        io::write_file(opt.output, io::functor_to_json(out.functor));
    return 0;
}

template <class K>
int cmd_minimal_model(const Options& opt)
{
    AInftyCategory<K> C = io::category_from_json<K>(io::read_file(opt.input));
    int arity = opt.arity ? opt.arity : std::min(5, 2 * C.arity_bound() - 1);
    TransferResult<K> out = minimal_model(C, arity);
    bool m3 = false;
    for (const auto& [chain, table] : out.small.products())
        if (table.arity() >= 3 && !table.is_zero_map())
            m3 = true;
    std::cout << "minimal-model: arity " << arity << ", higher products "
              << (m3 ? "present" : "absent") << "\n";
    if (!opt.output.empty())
        io::write_file(opt.output, io::functor_to_json(out.functor));
    return 0;
}

template <class K>
int cmd_enlarge(const Options& opt)
{
    AInftyCategory<K> C = io::category_from_json<K>(io::read_file(opt.input));
    auto objects = single_shift_objects(C, opt.window);
    AInftyCategory<K> E = enlarge(C, convention_of(opt.convention), objects);
    std::cout << "enlarge: convention " << opt.convention << ", " << E.num_objects()
              << " objects\n";
    if (!opt.output.empty())
        io::write_file(opt.output, io::category_to_json(E));
    return 0;
}

template <class K>
int cmd_square_check(const Options& opt)
{
    SDRData<K> s = io::sdr_from_json<K>(io::read_file(opt.input));
    RelationReport sdr_report = check_sdr(s);
    if (!sdr_report.ok()) {
        emit_report(opt, "square-check (input sdr)", sdr_report);
        return 1;
    }
    int arity = opt.arity ? opt.arity : std::min(4, 2 * s.big.arity_bound() - 1);
    auto objects = single_shift_objects(s.big, std::max(1, opt.window));
    ShiftConvention a = convention_of(opt.convention);
    std::optional<ShiftConvention> other;
    if (opt.cross)
        other = a == ShiftConvention::c1 ? ShiftConvention::c2 : ShiftConvention::c1;
    SquareCheckResult r = hpt_square_check(s, a, arity, objects, other);
    std::cout << "square-check: convention " << opt.convention
              << (opt.cross ? " (cross-paired)" : "") << ": "
              << (r.equal ? "EQUAL" : ("DIFFERS: " + r.diff)) << "\n";
    if (!opt.output.empty()) {
        RelationReport rep;
        rep.checked_arity = arity;
        if (!r.equal) {
            RelationViolation v;
            v.context = r.diff;
            rep.violations.push_back(std::move(v));
        }
        io::write_file(opt.output, io::report_to_json("square-check", rep));
    }
    return r.equal ? 0 : 1;
}

template <class K>
int cmd_tw_check(const Options& opt)
{
    auto [enl, t] = io::twisted_from_json<K>(io::read_file(opt.input));
    RelationReport report = check_mc(enl, t);
    // the twisted differential must square to zero on the endomorphisms
    if (report.ok()) {
        const GradedSpace& hom = enl.hom(t.base, t.base);
        for (Degree d = hom.lo(); d <= hom.hi(); ++d)
            for (int i = 0; i < hom.dim(d); ++i) {
                HomElem<K> e = HomElem<K>::unit(hom, {d, i});
                HomElem<K> once = tw_eval(enl, {t, t}, {e});
                HomElem<K> twice = tw_eval(enl, {t, t}, {once});
                if (!twice.is_zero()) {
                    RelationViolation v;
                    v.n = 1;
                    v.context = "twisted differential does not square to zero";
                    v.object_chain = {t.base.label(enl.base())};
                    v.basis_chain = {hom.label(d, i)};
                    report.violations.push_back(std::move(v));
                }
            }
    }
    emit_report(opt, "tw-check", report);
    return report.ok() ? 0 : 1;
}

template <class K>
int cmd_cone(const Options& opt)
{
    auto [enl, phi] = io::tw_morphism_from_json<K>(io::read_file(opt.input));
    if (phi.value.deg != -1 || !b1_tw(enl, phi).is_zero()) {
        std::cout << "cone: morphism is not closed of degree zero\n";
        return 1;
    }
    TwistedComplex<K> cone = mapping_cone(enl, phi);
    TriangleReport tri = triangle_check(enl, phi);
    std::cout << "cone: MC " << (tri.cone_mc ? "ok" : "FAILED") << ", composite X->Y->C "
              << (tri.comp1_zero_class ? "zero class" : "NONZERO") << ", composite Y->C->TX "
              << (tri.comp2_zero_class ? "zero class" : "NONZERO") << "\n";
    if (!opt.output.empty())
        io::write_file(opt.output, io::twisted_to_json(enl, cone));
    return tri.ok() ? 0 : 1;
}

template <class K>
int cmd_demo_dg(const Options& opt)
{
    SplitMix64 rng(opt.seed);
    std::vector<ChainComplex<K>> family;
    int n = std::max(1, std::min(opt.count, 3));
    for (int i = 0; i < n; ++i)
        family.push_back(random_complex<K>(rng, "X" + std::to_string(i), 3, -1, 1));
    int window = std::max(1, std::min(opt.window, 2));

    DgComparison two = compare_dg_with_enlargement(family, ShiftConvention::c2, window);
    DgComparison one = compare_dg_with_enlargement(family, ShiftConvention::c1, window);
    std::cout << "demo-dg: a=2: " << (two.equal ? "EQUAL" : "DIFFERS");
    if (one.equal)
        std::cout << "; a=1: EQUAL\n";
    else {
        const DgMismatch& m = one.mismatches.front();
        std::cout << "; a=1: DIFFERS at arity " << m.arity << ", shifts (";
        for (size_t i = 0; i + 1 < m.shifts.size(); ++i)
            std::cout << (i ? "," : "") << m.shifts[i];
        std::cout << ")\n";
    }
    if (!opt.output.empty()) {
        io::json j{{"format_version", io::format_version},
                   {"kind", "report"},
                   {"command", "demo-dg"},
                   {"ok", two.equal && !one.equal},
                   {"a2_equal", two.equal},
                   {"a1_equal", one.equal}};
        io::json mism = io::json::array();
        for (const auto& m : one.mismatches)
            mism.push_back(io::json{{"arity", m.arity}, {"shifts", m.shifts}, {"objects", m.objects}});
        j["a1_mismatches"] = mism;
        io::write_file(opt.output, j);
    }
    // the expected verdict: convention 2 agrees with DG, convention 1 does not
    return (two.equal && !one.equal) ? 0 : 1;
}

template <class K>
int cmd_generate(const Options& opt)
{
    if (opt.output.empty())
        throw std::invalid_argument("generate: --output directory is required");
    std::filesystem::create_directories(opt.output);
    CorpusParams params;
    io::json manifest{{"format_version", io::format_version},
                      {"kind", "manifest"},
                      {"field", io::field_tag<K>()},
                      {"seed", std::to_string(opt.seed)},
                      {"count", opt.count}};
    io::json instances = io::json::array();
    SplitMix64 seeds(opt.seed);
    bool any_m3 = false;
    for (int i = 0; i < opt.count; ++i) {
        CorpusInstance<K> inst = make_instance<K>(seeds.next(), params);
        // every emitted structure must pass its own verifier
        if (!check_relations(inst.category, 5).ok() || !check_sdr(inst.hodge).ok() ||
            !check_sdr(inst.sdr).ok() || !check_relations(inst.model.small, 5).ok() ||
            !check_functor(inst.model.functor, 5).ok()) {
            std::cout << "generate: instance " << i << " failed self-verification\n";
            return 1;
        }
        std::string stem = opt.output + "/instance" + std::to_string(i);
        io::write_file(stem + "_complexes.json", io::complexes_to_json(inst.complexes));
        io::write_file(stem + "_category.json", io::category_to_json(inst.category));
        io::write_file(stem + "_sdr.json", io::sdr_to_json(inst.hodge));
        io::write_file(stem + "_sdr_gauged.json", io::sdr_to_json(inst.sdr));
        io::write_file(stem + "_model.json", io::functor_to_json(inst.model.functor));
        any_m3 = any_m3 || inst.has_nonzero_m3;
        instances.push_back(io::json{{"index", i},
                                     {"seed", std::to_string(inst.seed)},
                                     {"complexes", inst.complexes.size()},
                                     {"has_nonzero_m3", inst.has_nonzero_m3}});
    }
    manifest["instances"] = instances;
    manifest["any_nonzero_m3"] = any_m3;
    io::write_file(opt.output + "/manifest.json", manifest);
    std::cout << "generate: " << opt.count << " instance(s), nonzero m3 "
              << (any_m3 ? "present" : "absent") << "\n";
    return 0;
}

template <class K>
int dispatch(const std::string& command, const Options& opt)
{
    if (command == "verify")
        return cmd_verify<K>(opt);
    if (command == "transfer")
        return cmd_transfer<K>(opt);
    if (command == "minimal-model")
        return cmd_minimal_model<K>(opt);
    if (command == "enlarge")
        return cmd_enlarge<K>(opt);
    if (command == "square-check")
        return cmd_square_check<K>(opt);
    if (command == "tw-check")
        return cmd_tw_check<K>(opt);
    if (command == "cone")
        return cmd_cone<K>(opt);
    if (command == "demo-dg")
        return cmd_demo_dg<K>(opt);
    if (command == "generate")
        return cmd_generate<K>(opt);
    throw std::invalid_argument("unknown command");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact toolkit for arity-truncated A-infinity categories"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--field", opt.field, "scalar field: q (exact rationals) or p:<prime>");

    std::vector<std::pair<std::string, CLI::App*>> subs;
    auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--input", opt.input, "input file");
        s->add_option("--output", opt.output, "output file (or directory for generate)");
        s->add_option("--arity", opt.arity, "check/transfer arity");
        s->add_option("--convention", opt.convention, "shift sign convention, 1 or 2");
        s->add_option("--window", opt.window, "maximal shift for enlargements");
        s->add_option("--seed", opt.seed, "corpus seed");
        s->add_option("--count", opt.count, "corpus size");
        subs.push_back({name, s});
        return s;
    };
    add("verify", "verify a category / functor / SDR / twisted complex");
    add("transfer", "homotopy transfer across an SDR");
    add("minimal-model", "Kadeishvili minimal model of a category");
    add("enlarge", "materialize the additive enlargement on shifted objects");
    auto* sq = add("square-check", "compare transfer-then-enlarge with enlarge-then-transfer");
    sq->add_flag("--cross", opt.cross, "pair different conventions on the two paths (must fail)");
    add("tw-check", "verify the Maurer-Cartan equation of a twisted complex");
    add("cone", "mapping cone of a closed degree-0 morphism, with triangle checks");
    add("demo-dg", "compare DG(A) on shifted complexes against both enlargements");
    add("generate", "emit the seeded corpus with its manifest");

    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed())
            command = name;

    try {
        if (opt.field == "q")
            return dispatch<Rational>(command, opt);
        if (opt.field.rfind("p:", 0) == 0) {
            Fp::set_modulus(std::stoull(opt.field.substr(2)));
            return dispatch<Fp>(command, opt);
        }
        throw std::invalid_argument("--field must be q or p:<prime>");
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

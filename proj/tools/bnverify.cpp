// bnverify: batch verifier for the split-model Courant algebroid engine.
//
// Commands:
//   axioms     bracket axiom suite + twist closure on an instance file
//   structure  almost-complex (and metric) invariant validation
//   integrable Nijenhuis integrability test with witness
//   adapt      torsion-free structure-preserving connection pipeline
//   kahler     full metric pipeline with per-stage postconditions
//   prolong    first-prolongation dimensions and exact-sequence verdicts
//
// Exit codes: 0 all checks pass; 1 a verified failure (witness in the
// report); 2 usage or parse error. Reports are deterministic: identical
// configuration yields byte-identical output.

#include <CLI11.hpp>

#include <bn/adapted.hpp>
#include <bn/instance.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr const char* kSchema = "schema: bnverify-report/1";

struct Options {
    std::string instance;
    std::uint64_t seed = 0;
    unsigned degree = 2;
    std::string out;
    std::size_t n = 0;
    std::string split;
};

int emit(const Options& opt, const std::string& body, bool pass) {
    std::string report = std::string(kSchema) + "\n" + body;
    if (!report.empty() && report.back() != '\n') report += '\n';
    report += pass ? "verdict: pass\n" : "verdict: fail\n";
    if (opt.out.empty()) {
        std::cout << report;
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << opt.out << "\n";
            return 2;
        }
        f << report;
    }
    return pass ? 0 : 1;
}

std::string flag(bool b) { return b ? "pass" : "FAIL"; }

int cmd_axioms(const Options& opt) {
    bn::Instance inst = bn::load_instance(opt.instance);
    std::vector<bn::Section> samples =
        bn::random_sections(inst.E.d(), opt.seed, opt.degree, 20);
    bn::AxiomReport rep = bn::check_courant_axioms(inst.E, samples);
    std::ostringstream body;
    body << "command: axioms\n"
         << "dim: " << inst.E.d() << "\n"
         << "twisted: " << (inst.E.twisted() ? "yes" : "no") << "\n"
         << "seed: " << opt.seed << "\n"
         << "degree: " << opt.degree << "\n"
         << "triples: " << samples.size() << "\n"
         << rep.to_string();
    return emit(opt, body.str(), rep.pass());
}

int cmd_structure(const Options& opt) {
    bn::Instance inst = bn::load_instance(opt.instance);
    if (!inst.S) throw bn::BnError("instance has no structure block");
    bn::StructureReport rep = bn::validate_bn_gacs(inst.E, *inst.S);
    std::ostringstream body;
    body << "command: structure\n"
         << "dim: " << inst.E.d() << "\n"
         << rep.to_string();
    bool pass = rep.pass();
    if (inst.S->Gend) {
        bn::MetricReport mrep = bn::validate_pseudo_hermitian(inst.E, *inst.S);
        body << mrep.to_string();
        pass = pass && mrep.pass();
    }
    return emit(opt, body.str(), pass);
}

int cmd_integrable(const Options& opt) {
    bn::Instance inst = bn::load_instance(opt.instance);
    if (!inst.S) throw bn::BnError("instance has no structure block");
    bn::IntegrabilityReport rep = bn::is_integrable(inst.E, *inst.S);
    std::ostringstream body;
    body << "command: integrable\n"
         << "dim: " << inst.E.d() << "\n"
         << rep.to_string();
    return emit(opt, body.str(), rep.integrable);
}

int cmd_adapt(const Options& opt) {
    bn::Instance inst = bn::load_instance(opt.instance);
    if (!inst.S) throw bn::BnError("instance has no structure block");
    bn::Connection D0 = bn::torsion_free_base(inst.E);
    bn::Connection D1 = bn::make_u0_parallel(D0, inst.S->u0);
    bn::AdaptedResult ad = bn::build_adapted(D1, *inst.S);
    bool torsion_free = bn::torsion(ad.D).is_zero();
    std::ostringstream body;
    body << "command: adapt\n"
         << "dim: " << inst.E.d() << "\n"
         << "preserves_F: " << flag(ad.preserves_F) << "\n"
         << "preserves_u0: " << flag(ad.preserves_u0) << "\n"
         << "anticommutation: " << flag(ad.anticommute) << "\n"
         << "torsion_formula_interior: " << flag(ad.torsion_interior) << "\n"
         << "torsion_formula_u0: " << flag(ad.torsion_u0) << "\n"
         << "torsion_free: " << flag(torsion_free) << "\n";
    if (!ad.witness.empty()) body << "witness: " << ad.witness << "\n";
    if (!torsion_free)
        body << "witness: nonzero torsion (structure not integrable)\n";
    return emit(opt, body.str(), ad.pass() && torsion_free);
}

int cmd_kahler(const Options& opt) {
    bn::Instance inst = bn::load_instance(opt.instance);
    if (!inst.S) throw bn::BnError("instance has no structure block");
    if (!inst.S->Gend) throw bn::BnError("instance has no Gend block");
    bn::KahlerConnectionResult res = bn::build_bn_kahler_connection(inst.E, *inst.S);
    std::ostringstream body;
    body << "command: kahler\n"
         << "dim: " << inst.E.d() << "\n"
         << res.report.to_string();
    return emit(opt, body.str(), res.report.pass());
}

bool parse_split(const std::string& text, std::size_t out[4]) {
    unsigned vals[4];
    char colon, c1, c2;
    std::istringstream in(text);
    if (!(in >> vals[0] >> c1 >> vals[1] >> colon >> vals[2] >> c2 >> vals[3]) ||
        c1 != ',' || c2 != ',' || colon != ':' || !(in >> std::ws).eof())
        return false;
    for (int i = 0; i < 4; ++i) out[i] = vals[i];
    return true;
}

int cmd_prolong(const Options& opt) {
    std::ostringstream body;
    body << "command: prolong\n";
    bool pass = true;
    if (!opt.split.empty()) {
        std::size_t s[4];
        if (!parse_split(opt.split, s)) throw bn::BnError("invalid --split");
        bn::KahlerProlongation kp = bn::kahler_prolongation(s[0], s[1], s[2], s[3]);
        body << "split: " << opt.split << "\n"
             << "dimension_expected: " << kp.expected_dimension << "\n"
             << "dimension_computed: " << kp.total.dimension << "\n"
             << "direct_sum: " << flag(kp.direct_sum_verified) << "\n";
        pass = kp.total.dimension == kp.expected_dimension && kp.direct_sum_verified;
    } else {
        std::size_t n = opt.n;
        body << "n: " << n << "\n";
        std::size_t expected = bn::u_prolongation_dimension(n);
        for (std::size_t m1 = 0; m1 <= n; ++m1) {
            std::size_t m2 = n - m1;
            bn::UModel mdl = bn::u_model(m1, m2);
            std::vector<bn::Mat> h = bn::stabilizer_algebra(
                mdl.V, {bn::StructureTensor::endomorphism(mdl.F),
                        bn::StructureTensor::vector_tensor(mdl.u0)});
            bn::ProlongationSpace pr = bn::generalized_first_prolongation(mdl.V, h);
            bool ok = pr.dimension == expected;
            pass = pass && ok;
            body << "split " << m1 << "," << m2 << ": expected " << expected
                 << ", computed " << pr.dimension << " (" << flag(ok) << ")\n";
        }
        bn::SequenceReport sr = bn::check_exact_sequence(2 * n + 1, true);
        body << "exact_sequence_dim_" << 2 * n + 1 << ": " << flag(sr.pass()) << "\n";
        pass = pass && sr.pass();
    }
    return emit(opt, body.str(), pass);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verifier for odd split-model Courant algebroid structures"};
    app.require_subcommand(1);
    Options opt;

    auto add_instance_cmd = [&](const std::string& name, const std::string& desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->add_option("--instance", opt.instance, "instance file")->required();
        c->add_option("--seed", opt.seed, "random seed (default 0)");
        c->add_option("--degree", opt.degree, "max degree of random sections (default 2)");
        c->add_option("--out", opt.out, "write report to file instead of stdout");
        return c;
    };
    CLI::App* axioms = add_instance_cmd("axioms", "Courant bracket axiom suite");
    CLI::App* structure = add_instance_cmd("structure", "structure invariant validation");
    CLI::App* integrable = add_instance_cmd("integrable", "Nijenhuis integrability test");
    CLI::App* adapt = add_instance_cmd("adapt", "structure-preserving connection pipeline");
    CLI::App* kahler = add_instance_cmd("kahler", "metric pipeline with stage checks");

    CLI::App* prolong = app.add_subcommand("prolong", "prolongation dimension check");
    prolong->add_option("--n", opt.n, "complex rank n >= 1");
    prolong->add_option("--split", opt.split, "signature split k1,l1:k2,l2");
    prolong->add_option("--out", opt.out, "write report to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*axioms) return cmd_axioms(opt);
        if (*structure) return cmd_structure(opt);
        if (*integrable) return cmd_integrable(opt);
        if (*adapt) return cmd_adapt(opt);
        if (*kahler) return cmd_kahler(opt);
        if (*prolong) {
            if (opt.split.empty() && opt.n == 0) {
                std::cerr << "error: prolong needs --n >= 1 or --split\n";
                return 2;
            }
            return cmd_prolong(opt);
        }
    } catch (const bn::BnError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

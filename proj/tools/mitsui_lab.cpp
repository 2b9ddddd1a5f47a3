// mitsui-lab: configuration-driven experiments on prime elements of number
// fields. See README.md for config schemas.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mitsui/harness.hpp"
#include "mitsui/lattice.hpp"

using namespace mitsui;

static int emit_to(const Report& rep, const std::string& out, const std::string& format,
                   bool check) {
  if (out.empty()) {
    emit_report(rep, std::cout, format);
  } else {
    std::ofstream f(out);
    if (!f) throw config_error("cannot open output path: " + out);
    emit_report(rep, f, format);
  }
  if (check && !rep.check_passed) {
    for (const auto& m : rep.check_messages) std::cerr << "check failed: " << m << "\n";
    return 3;
  }
  return 0;
}

static NumberField field_from_options(const std::string& field_path) {
  if (field_path.empty()) throw config_error("--field is required");
  return load_field_file(field_path);
}

int main(int argc, char** argv) {
  CLI::App app{"number-field prime-element laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", field_path, in_path;
  bool check = false;
  u64 bound = 100;
  std::vector<i64> modulus_gen;
  double X = 100;
  int Y = 10, fY = 100;
  double fM = 20;
  std::vector<double> flo{0.2}, fhi{0.3};
  int fcomp = 1;

  auto add_config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "csv|json");
    sub->add_flag("--check", check, "exit 3 when configured thresholds fail");
  };

  auto* cmd_field = app.add_subcommand("field-info", "print field invariants");
  cmd_field->add_option("--field", field_path, "field config (JSON)")->required();

  auto* cmd_sieve = app.add_subcommand("sieve-primes", "prime ideals of bounded norm");
  cmd_sieve->add_option("--field", field_path)->required();
  cmd_sieve->add_option("--bound", bound, "norm bound")->required();
  cmd_sieve->add_option("--out", out_path);

  auto* cmd_enum =
      app.add_subcommand("enumerate-prime-elements", "prime elements in a region");
  add_config_opts(cmd_enum);

  auto* cmd_chars = app.add_subcommand("characters", "finite character table");
  cmd_chars->add_option("--field", field_path)->required();
  cmd_chars->add_option("--modulus", modulus_gen, "modulus generator coordinates")->required();
  cmd_chars->add_option("--out", out_path);

  auto* cmd_sectors = app.add_subcommand("sectors", "annulus-sector cover");
  cmd_sectors->add_option("--field", field_path)->required();
  cmd_sectors->add_option("--X", X, "region size")->required();
  cmd_sectors->add_option("--Y", Y, "sector parameter")->required();
  cmd_sectors->add_option("--out", out_path);

  auto* cmd_fourier = app.add_subcommand("fourier-approx", "torus indicator approximation");
  cmd_fourier->add_option("--lo", flo, "box lower corner");
  cmd_fourier->add_option("--hi", fhi, "box upper corner");
  cmd_fourier->add_option("--Y", fY, "bandwidth");
  cmd_fourier->add_option("--M", fM, "margin sharpness");
  cmd_fourier->add_option("--components", fcomp, "component count");
  cmd_fourier->add_option("--out", out_path);

  auto* cmd_bb = app.add_subcommand("bounded-basis", "entry-bounded lattice basis");
  cmd_bb->add_option("--in", in_path, "matrix file (whitespace-separated integers)")->required();
  cmd_bb->add_option("--out", out_path);

  for (const char* name : {"pit", "mitsui", "siegel-walfisz-q", "proof-path", "properties"})
    add_config_opts(app.add_subcommand(name, name));

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_field->parsed()) {
      NumberField K = field_from_options(field_path);
      std::cout << "name: " << K.spec.name << "\n"
                << "degree: " << K.n << "\n"
                << "signature: (" << K.r1 << ", " << K.r2 << ")\n"
                << "discriminant: " << K.discriminant.get_str() << "\n"
                << "regulator: " << format_double(K.regulator) << "\n"
                << "torsion order: " << K.w << "\n"
                << "class number: " << K.h << "\n"
                << "sievable: " << (K.sievable ? "yes" : "no") << "\n";
      for (size_t u = 0; u < K.units.size(); ++u) {
        std::cout << "fundamental unit " << u << ":";
        for (i64 c : K.units[u].c) std::cout << ' ' << c;
        std::cout << "\n";
      }
      return 0;
    }
    if (cmd_sieve->parsed()) {
      NumberField K = field_from_options(field_path);
      auto primes = sieve_prime_ideals(K, bound);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << "norm";
      for (int i = 0; i < K.n; ++i) *os << ",coord" << i;
      *os << ",residue_class,log_weight\n";
      for (const auto& p : primes) {
        *os << p.norm;
        for (int i = 0; i < K.n; ++i)
          *os << ',' << (p.generator ? p.generator->c[i] : 0);
        *os << ",0," << format_double(std::log(double(p.norm))) << '\n';
      }
      return 0;
    }
    if (cmd_enum->parsed()) {
      auto cfg = load_experiment_file(config_path);
      NumberField K = load_field_file(cfg.field_path);
      FracIdeal q = unit_ideal(K);
      if (!cfg.modulus_gens.empty()) {
        std::vector<Elem> gens;
        for (auto& g : cfg.modulus_gens) gens.push_back(Elem{g, 1});
        q = ideal_from_generators(K, gens);
      }
      FracIdeal a = K.class_reps.at(cfg.ambient_class);
      std::optional<CongruenceClass> cc;
      if (cfg.alpha) cc = make_congruence_class(K, a, q, Elem{*cfg.alpha, 1});
      Region region = region_from_desc(K, cfg.region, 1.0);
      SieveTable table = build_sieve_table(K, region_norm_ceiling(K, region),
                                           SieveOptions{false, true});
      EnumerateOptions opt;
      opt.record_residues = cc.has_value();
      auto els = enumerate_prime_elements(K, a, region, cc, table, opt);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << "norm";
      for (int i = 0; i < K.n; ++i) *os << ",coord" << i;
      *os << ",residue_class,log_weight\n";
      for (const auto& e : els) {
        *os << e.norm_q;
        for (int i = 0; i < K.n; ++i) *os << ',' << e.elem.c[i];
        *os << ',' << e.residue_index << ',' << format_double(e.log_weight) << '\n';
      }
      return 0;
    }
    if (cmd_chars->parsed()) {
      NumberField K = field_from_options(field_path);
      if (int(modulus_gen.size()) != K.n)
        throw config_error("--modulus needs n coordinates");
      auto q = ideal_from_generators(K, {Elem{modulus_gen, 1}});
      auto cg = component_group(K, q);
      auto chars = enumerate_finite_characters(cg);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << "# torsor trivialized by the first unit class in canonical order\n";
      *os << "character,element,value_re,value_im,real\n";
      for (const auto& ch : chars)
        for (u64 g = 0; g < cg.quotient_order; ++g) {
          auto v = ch.on_coset(cg, g);
          *os << ch.label << ',' << g << ',' << format_double(v.real()) << ','
              << format_double(v.imag()) << ',' << (ch.real ? 1 : 0) << '\n';
        }
      return 0;
    }
    if (cmd_sectors->parsed()) {
      NumberField K = field_from_options(field_path);
      auto cover = cover_with_annulus_sectors(K, X, Y);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << "index";
      for (int i = 0; i < K.r1 + K.r2; ++i) *os << ",a" << i;
      *os << ",radial_width";
      for (int j = 0; j < K.r2; ++j) *os << ",theta" << j;
      *os << ",angular_width,sign_mask,volume\n";
      for (size_t s = 0; s < cover.sectors.size(); ++s) {
        const auto& d = cover.sectors[s].sector;
        *os << s;
        for (double a : d.a) *os << ',' << format_double(a);
        *os << ',' << format_double(d.radial_width);
        for (double t : d.theta) *os << ',' << format_double(t);
        *os << ',' << format_double(d.angular_width) << ',' << d.sign_mask << ','
            << format_double(region_volume(cover.sectors[s])) << '\n';
      }
      std::cerr << "sectors: " << cover.sectors.size()
                << "  count/Y^n = " << format_double(cover.count_constant) << "\n";
      return 0;
    }
    if (cmd_fourier->parsed()) {
      TorusBox P;
      P.dim = int(flo.size());
      P.lo = flo;
      P.hi = fhi;
      P.component_count = fcomp;
      auto ap = fourier_approximate_indicator(P, fY, fM);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << "# c0=" << format_double(ap.c0) << " max_coeff=" << format_double(ap.max_coeff_abs)
          << " residual_off_margin=" << format_double(ap.residual_off_margin)
          << " margin_volume=" << format_double(ap.margin_volume) << "\n";
      *os << "axis,frequency,coeff_re,coeff_im\n";
      for (int a = 0; a < ap.dim; ++a)
        for (int k = -ap.Y; k <= ap.Y; ++k) {
          auto c = ap.axis_coeffs[a][k + ap.Y];
          *os << a << ',' << k << ',' << format_double(c.real()) << ','
              << format_double(c.imag()) << '\n';
        }
      return 0;
    }
    if (cmd_bb->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw config_error("cannot open matrix file: " + in_path);
      std::vector<i64> vals;
      i64 v;
      while (in >> v) vals.push_back(v);
      int d = int(std::llround(std::sqrt(double(vals.size()))));
      if (d * d != int(vals.size()))
        throw config_error("matrix file must contain d*d integers");
      IntegerLattice lat;
      lat.basis = ZMat(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) lat.basis.at(i, j) = z_of(vals[i * d + j]);
      auto out = bounded_basis(lat);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) *os << (j ? " " : "") << out.basis.at(i, j).get_str();
        *os << '\n';
      }
      return 0;
    }
    // config-driven experiments
    auto cfg = load_experiment_file(config_path);
    for (const char* name : {"pit", "mitsui", "siegel-walfisz-q", "proof-path", "properties"})
      if (app.get_subcommand(name)->parsed() && cfg.kind != name)
        throw config_error(std::string("config experiment kind is '") + cfg.kind +
                           "', subcommand is '" + name + "'");
    if (!out_path.empty()) cfg.out_path = out_path;
    Report rep = run_experiment(cfg);
    return emit_to(rep, cfg.out_path, format, check);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

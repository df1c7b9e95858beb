// Command-line front end: grid reports, theorem checks, figure construction,
// line-weight decomposition and the search drivers, all over the library.
// Exit codes: 0 pass/found, 1 fail/counterexample/no witness, 2 usage or
// unparseable input, 3 size cap exceeded.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirspec/constructions.hpp"
#include "dirspec/core.hpp"
#include "dirspec/decompose.hpp"
#include "dirspec/group.hpp"
#include "dirspec/io.hpp"
#include "dirspec/redei.hpp"
#include "dirspec/search.hpp"

namespace {

using dirspec::Direction;
using dirspec::Prime;
using nlohmann::ordered_json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    return dirspec::read_text_file(path);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        dirspec::write_text_file(path, content);
}

std::string join_directions(const std::vector<Direction>& dirs) {
    std::string out;
    for (size_t i = 0; i < dirs.size(); ++i) {
        if (i) out += ",";
        out += dirspec::to_string(dirs[i]);
    }
    return out.empty() ? "none" : out;
}

ordered_json set_to_json(const dirspec::PointSet& s) {
    ordered_json cells = ordered_json::array();
    for (const auto& q : s.points()) cells.push_back({q.x, q.y});
    return cells;
}

int cmd_spectrum(const std::string& input) {
    dirspec::RatGrid g = dirspec::parse_grid_auto(read_input(input));
    Prime p(g.p());
    std::ostringstream os;
    os << "p=" << p.value() << " total=" << dirspec::rat_to_string(g.total()) << "\n";
    for (Direction d : dirspec::all_directions(p)) {
        auto prof = dirspec::direction_profile(g, d);
        os << "profile " << dirspec::to_string(d) << ":";
        for (const auto& s : prof.sums) os << " " << dirspec::rat_to_string(s);
        os << (dirspec::is_equidistributed(g, d) ? "" : " special") << "\n";
    }
    auto specials = dirspec::special_directions(g);
    os << "special: " << join_directions(specials) << "\n";
    dirspec::Rat total = g.total();
    if (total.get_den() == 1 && total > 0 && total.get_num() % p.value() == 0) {
        long k = total.get_num().get_si() / p.value();
        os << "|S|=" << total.get_num() << " k=" << k
           << " ghidelli_bound=" << dirspec::ghidelli_bound(p.value(), static_cast<int>(k)) << "\n";
    }
    std::cout << os.str();
    return 0;
}

int cmd_verify(const std::string& name, int pval, int jobs, int samples, uint64_t seed) {
    Prime p(pval);
    ordered_json j;
    j["check"] = name;
    j["p"] = pval;
    bool pass = false;
    if (name == "lemma61") {
        auto rep = dirspec::verify_l_identities(p);
        pass = rep.pass;
        j["cases"] = rep.cases;
        j["detail"] = rep.detail;
    } else if (name == "redei-crosscheck") {
        auto rep = dirspec::verify_redei_crosscheck(p, samples, seed);
        pass = rep.pass;
        j["cases"] = rep.cases;
        j["detail"] = rep.detail;
    } else {
        dirspec::SearchReport rep;
        if (name == "no-two")
            rep = dirspec::verify_no_two_special(p, jobs);
        else if (name == "uniqueness")
            rep = dirspec::verify_three_special_uniqueness(p, jobs);
        else if (name == "union-lines")
            rep = dirspec::verify_union_lines_iff(p, jobs);
        else
            throw CLI::ValidationError("verify",
                                       "unknown check (expected lemma61|no-two|uniqueness|"
                                       "union-lines|redei-crosscheck)");
        pass = rep.pass;
        j["sets_scanned"] = rep.sets_scanned;
        ordered_json buckets;
        for (const auto& [d, n] : rep.buckets) buckets[std::to_string(d)] = n;
        j["buckets"] = buckets;
        j["detail"] = rep.detail;
        if (!rep.counterexamples.empty()) {
            ordered_json cx = ordered_json::array();
            for (const auto& s : rep.counterexamples) cx.push_back(set_to_json(s));
            j["counterexamples"] = cx;
        }
    }
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? 0 : 1;
}

int cmd_construct(const std::string& name, int pval, const std::string& format,
                  const std::string& out) {
    dirspec::IntGrid grid = [&] {
        if (name == "triangle") {
            if (pval == 0) throw CLI::ValidationError("construct", "--p is required for triangle");
            return dirspec::IntGrid::indicator(dirspec::triangle_set(Prime(pval)));
        }
        int fig_p = name == "plus5" ? 5 : name == "fig7" ? 7 : name == "fig11" ? 11 : 13;
        if (name != "plus5" && name != "fig7" && name != "fig11" && name != "fig13")
            throw CLI::ValidationError("construct",
                                       "unknown name (expected triangle|plus5|fig7|fig11|fig13)");
        if (pval != 0 && pval != fig_p)
            throw CLI::ValidationError("construct", "--p disagrees with the figure's plane size");
        return dirspec::figure_fixture(fig_p);
    }();
    write_output(out, format == "json" ? dirspec::write_json(grid) : dirspec::write_ascii(grid));
    return 0;
}

int cmd_decompose(const std::string& input, const std::string& dirs_flag, const std::string& out) {
    dirspec::RatGrid f = dirspec::parse_grid_auto(read_input(input));
    Prime p(f.p());
    dirspec::LineWeighting w{p, {}, {}, {}};
    if (dirs_flag.empty()) {
        w = dirspec::decompose(f);
    } else {
        std::vector<Direction> order;
        std::stringstream ss(dirs_flag);
        std::string tok;
        while (std::getline(ss, tok, ';')) order.push_back(dirspec::parse_direction(p, tok));
        auto peel = dirspec::decompose_along(f, order);
        if (!peel.residual.is_zero()) {
            std::cerr << "nonzero residual: the grid has a special direction outside "
                      << join_directions(order) << "\n";
            return 1;
        }
        w = peel.weighting;
    }
    write_output(out, dirspec::write_weighting_json(w));
    bool exact = dirspec::reconstruct(w) == f;
    std::cerr << "directions used: " << join_directions(w.order) << "\n"
              << "reconstruction " << (exact ? "exact" : "MISMATCH") << "\n";
    return exact ? 0 : 1;
}

int cmd_search(const std::string& mode, int pval, long long cardinality, int special,
               long long budget, int jobs, uint64_t seed) {
    Prime p(pval);
    if (mode == "exhaustive") {
        auto rep = dirspec::gap_spectrum(p, jobs, seed);
        std::cout << dirspec::write_spectrum_json(rep);
        return 0;
    }
    if (mode == "orbit") {
        if (cardinality < 0)
            throw CLI::ValidationError("search", "--cardinality is required in orbit mode");
        auto census = dirspec::orbit_census(p, static_cast<int>(cardinality), jobs);
        ordered_json j;
        j["p"] = pval;
        j["cardinality"] = cardinality;
        j["orbit_count"] = census.reps.size();
        j["mass"] = census.mass;
        ordered_json orbits = ordered_json::array();
        for (size_t i = 0; i < census.reps.size(); ++i)
            orbits.push_back({{"size", census.sizes[i]}, {"set", set_to_json(census.reps[i])}});
        j["orbits"] = orbits;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (mode != "anneal")
        throw CLI::ValidationError("search", "unknown mode (expected exhaustive|orbit|anneal)");

    dirspec::ProbeResult res;
    if (cardinality >= 0) {
        if (cardinality % pval)
            throw CLI::ValidationError("search", "--cardinality must be a multiple of p");
        long long k = cardinality / pval;
        int minimal_k = 1;
        while (minimal_k < pval - 1 && dirspec::ghidelli_bound(pval, minimal_k) > special)
            ++minimal_k;
        if (k == minimal_k) {
            res = dirspec::min_cardinality_probe(p, special, budget, seed);
        } else {
            res.cardinality = cardinality;
            if (special == 4 && pval <= 31) {
                dirspec::PipelineOptions opt;
                opt.budget = budget;
                auto out = dirspec::four_direction_search(p, opt);
                if (out.status == dirspec::PipelineStatus::found && out.grid &&
                    out.grid->is_zero_one() && out.grid->total() == cardinality) {
                    res.witness = out.grid->support_set();
                    res.source = "pipeline";
                    res.iterations = out.combos_tried;
                }
            }
            if (!res.witness) {
                std::vector<Direction> target;
                if (special == 4) {
                    target = {Direction::slope(0), Direction::slope(1),
                              Direction::slope(pval - 1), Direction::vertical()};
                } else {
                    for (int m = 0; m + 1 < special; ++m) target.push_back(Direction::slope(m));
                    target.push_back(Direction::vertical());
                }
                res.witness = dirspec::anneal_special_set(p, target, k, budget, seed);
                res.source = res.witness ? "anneal" : "none";
                res.iterations += budget;
            }
        }
    } else {
        res = dirspec::min_cardinality_probe(p, special, budget, seed);
    }

    ordered_json j;
    j["p"] = pval;
    j["cardinality"] = res.cardinality;
    j["special"] = special;
    j["source"] = res.source;
    if (res.witness) {
        j["set"] = set_to_json(*res.witness);
        auto verified = dirspec::special_directions(*res.witness);
        j["verified_special"] = join_directions(verified);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    j["result"] = "none within budget";
    std::cout << j.dump(2) << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"special directions of point sets over small prime planes"};
    app.require_subcommand(1);

    std::string spectrum_input;
    auto* spectrum = app.add_subcommand("spectrum", "per-direction line sums of a grid");
    spectrum->add_option("input", spectrum_input, "grid file (ascii or json), - for stdin")
        ->required();

    std::string verify_name;
    int verify_p = 0, verify_jobs = 1, verify_samples = 10000;
    uint64_t verify_seed = 1;
    auto* verify = app.add_subcommand("verify", "run one named theorem check");
    verify->add_option("name", verify_name, "lemma61|no-two|uniqueness|union-lines|redei-crosscheck")
        ->required();
    verify->add_option("--p", verify_p, "plane prime")->required();
    verify->add_option("--jobs", verify_jobs, "worker count for scans");
    verify->add_option("--samples", verify_samples, "random sets for redei-crosscheck");
    verify->add_option("--seed", verify_seed, "seed for randomized checks");

    std::string construct_name, construct_format = "ascii", construct_out = "-";
    int construct_p = 0;
    auto* construct = app.add_subcommand("construct", "emit a named set as a grid");
    construct->add_option("--name", construct_name, "triangle|plus5|fig7|fig11|fig13")->required();
    construct->add_option("--p", construct_p, "plane prime (triangle; optional elsewhere)");
    construct->add_option("--format", construct_format, "ascii|json")
        ->check(CLI::IsMember({"ascii", "json"}));
    construct->add_option("--out", construct_out, "output path, - for stdout");

    std::string decompose_input, decompose_dirs, decompose_out = "-";
    auto* decomp = app.add_subcommand("decompose", "write a grid as weighted lines");
    decomp->add_option("input", decompose_input, "grid file, - for stdin")->required();
    decomp->add_option("--dirs", decompose_dirs,
                       "semicolon-separated peel order, e.g. \"(1,0);(0,1)\" (default: the "
                       "grid's special directions)");
    decomp->add_option("--out", decompose_out, "output path for the weighting json");

    std::string search_mode;
    int search_p = 0, search_special = 4, search_jobs = 1;
    long long search_cardinality = -1, search_budget = 200000;
    uint64_t search_seed = 1;
    auto* search = app.add_subcommand("search", "orbit census, spectrum census, or witness probe");
    search->add_option("--p", search_p, "plane prime")->required();
    search->add_option("--mode", search_mode, "exhaustive|orbit|anneal")->required();
    search->add_option("--cardinality", search_cardinality, "set size (orbit/anneal modes)");
    search->add_option("--special", search_special, "target special-direction count");
    search->add_option("--budget", search_budget, "iteration budget for probes");
    search->add_option("--jobs", search_jobs, "worker count");
    search->add_option("--seed", search_seed, "probe seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(spectrum)) return cmd_spectrum(spectrum_input);
        if (app.got_subcommand(verify))
            return cmd_verify(verify_name, verify_p, verify_jobs, verify_samples, verify_seed);
        if (app.got_subcommand(construct))
            return cmd_construct(construct_name, construct_p, construct_format, construct_out);
        if (app.got_subcommand(decomp))
            return cmd_decompose(decompose_input, decompose_dirs, decompose_out);
        if (app.got_subcommand(search))
            return cmd_search(search_mode, search_p, search_cardinality, search_special,
                              search_budget, search_jobs, search_seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const dirspec::CapError& e) {
        std::cerr << "size cap: " << e.what() << "\n";
        return 3;
    } catch (const dirspec::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

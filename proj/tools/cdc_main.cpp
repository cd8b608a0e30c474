// cdc: session-oriented CLI over the inference engine.
//
// All results are JSON on stdout (sorted keys, sorted arrays, so identical
// inputs produce identical bytes). Errors go to stderr. Exit codes:
//   0 success, 2 usage error, 3 rejected write (ValidationOutcome JSON on
//   stdout), 4 I/O or input-file error.
//
// A session directory (--session or CDC_SESSION_DIR) persists kb.jsonl,
// audit.jsonl, config.json and session.json between invocations. The meta
// fiber is frozen from the first load until --end-session; a later `load`
// starts a new session and rebuilds the typing from the stored meta records.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cdc/cdc.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliExit {
    int code;
    std::string message; // stderr; may be empty when payload already printed
};

[[noreturn]] void fail(int code, const std::string& msg) {
    throw CliExit{code, msg};
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

json tuples_to_json(const std::vector<cdc::FourTuple>& ts) {
    json arr = json::array();
    for (const auto& t : ts) arr.push_back(t.to_json());
    return arr;
}

json strings_to_json(const std::set<std::string>& s) {
    return json(std::vector<std::string>(s.begin(), s.end()));
}

cdc::DomainPath domain_arg(const std::string& s) {
    try {
        return cdc::DomainPath::parse(s);
    } catch (const cdc::Error& e) {
        fail(2, e.what());
    }
}

// rel:feature[:backward]
cdc::Constraint constraint_arg(const std::string& s) {
    auto p1 = s.find(':');
    if (p1 == std::string::npos)
        fail(2, "constraint must be rel:feature[:backward]: \"" + s + "\"");
    auto p2 = s.find(':', p1 + 1);
    cdc::Constraint c{s.substr(0, p1),
                      s.substr(p1 + 1, p2 == std::string::npos
                                           ? std::string::npos
                                           : p2 - p1 - 1),
                      cdc::Direction::forward};
    if (p2 != std::string::npos) {
        std::string dir = s.substr(p2 + 1);
        if (dir == "backward")
            c.direction = cdc::Direction::backward;
        else if (dir != "forward")
            fail(2, "constraint direction must be forward or backward: \"" + s + "\"");
    }
    if (!cdc::is_valid_name(c.rel) || !cdc::is_valid_name(c.feature))
        fail(2, "bad constraint names in \"" + s + "\"");
    return c;
}

std::set<std::string> csv_arg(const std::string& s) {
    std::set<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(',', pos);
        std::string item = s.substr(pos, next == std::string::npos
                                             ? std::string::npos
                                             : next - pos);
        if (!item.empty()) out.insert(item);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

// An argument that is either one inline JSON object or a path to a JSONL file.
std::vector<std::string> input_lines(const std::string& arg, bool& from_file) {
    from_file = arg.empty() || arg.front() != '{';
    if (!from_file) return {arg};
    std::ifstream in(arg);
    if (!in) fail(4, "IoError: cannot open " + arg);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            lines.push_back(line);
    return lines;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(4, "IoError: cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(4, "ParseError: invalid JSON in " + path);
    return j;
}

// --spec / --grid arguments accept inline JSON or a file path
json json_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') {
        json j = json::parse(arg, nullptr, false);
        if (j.is_discarded()) fail(2, "ParseError: invalid inline JSON");
        return j;
    }
    return load_json_file(arg);
}

struct SessionPaths {
    fs::path dir;
    fs::path kb() const { return dir / "kb.jsonl"; }
    fs::path audit() const { return dir / "audit.jsonl"; }
    fs::path config() const { return dir / "config.json"; }
    fs::path state() const { return dir / "session.json"; }
};

bool session_active(const SessionPaths& sp) {
    if (!fs::exists(sp.state())) return false;
    std::ifstream in(sp.state());
    json j = json::parse(in, nullptr, false);
    return !j.is_discarded() && j.value("active", false);
}

void write_state(const SessionPaths& sp, bool active) {
    std::ofstream out(sp.state(), std::ios::trunc);
    out << json{{"active", active}}.dump() << "\n";
}

void append_audit(const SessionPaths& sp, const cdc::AuditLog& log) {
    if (log.size() == 0) return;
    std::ofstream out(sp.audit(), std::ios::app);
    if (!out) fail(4, "IoError: cannot write " + sp.audit().string());
    for (const auto& e : log.entries()) out << e.to_json().dump() << "\n";
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"cdc: domain-constrained inference over {from, rel, domain, to} records"};
    app.require_subcommand(0, 1);

    std::string session_dir;
    std::string config_path;
    std::vector<std::string> preload;
    bool end_session = false;
    app.add_option("--session", session_dir,
                   "session directory persisting kb + audit log")
        ->envname("CDC_SESSION_DIR");
    app.add_option("--config", config_path,
                   "config JSON with contradiction rules");
    app.add_option("--load", preload, "JSONL files loaded before the command");
    app.add_flag("--end-session", end_session, "end the session after the command");

    auto* cmd_load = app.add_subcommand("load", "bulk-load JSONL files (unvalidated)");
    std::vector<std::string> load_files;
    cmd_load->add_option("files", load_files, "JSONL files")->required();

    auto* cmd_insert = app.add_subcommand("insert", "validated insert of four-tuples");
    std::string insert_input;
    bool unchecked = false;
    cmd_insert->add_option("input", insert_input, "inline JSON object or JSONL file")
        ->required();
    cmd_insert->add_flag("--unchecked", unchecked, "raw add, skip validation");

    auto* cmd_query = app.add_subcommand("query", "fiber-scoped match or closure");
    std::string q_domain, q_from, q_rel, q_to;
    bool q_closure = false, q_universal = false;
    cmd_query->add_option("--domain", q_domain)->required();
    cmd_query->add_option("--from", q_from);
    cmd_query->add_option("--rel", q_rel);
    cmd_query->add_option("--to", q_to);
    cmd_query->add_flag("--closure", q_closure, "transitive closure");
    cmd_query->add_flag("--universal", q_universal, "include the @Universal fiber");

    auto* cmd_multi = app.add_subcommand("multi", "multi-constraint candidate reduction");
    std::string m_domain;
    std::vector<std::string> m_constraints;
    cmd_multi->add_option("--domain", m_domain)->required();
    cmd_multi->add_option("--constraint", m_constraints,
                          "rel:feature[:backward], ordered, repeatable")
        ->required();

    auto* cmd_temporal = app.add_subcommand("temporal", "records before a turn domain");
    std::string t_rel, t_before, t_scope;
    cmd_temporal->add_option("--rel", t_rel)->required();
    cmd_temporal->add_option("--before", t_before)->required();
    cmd_temporal->add_option("--scope", t_scope)->required();

    auto* cmd_reindex = app.add_subcommand("reindex", "typed inheritance from parent fibers");
    std::string r_domain;
    cmd_reindex->add_option("--domain", r_domain, "reindex one child domain");

    auto* cmd_bridge = app.add_subcommand("bridge", "cross-domain operations");
    cmd_bridge->require_subcommand(1);
    auto* br_add = cmd_bridge->add_subcommand("add", "store a bridge record");
    std::string br_input;
    br_add->add_option("input", br_input, "inline JSON object or JSONL file")->required();
    auto* br_analogy = cmd_bridge->add_subcommand("analogy", "partial structure check");
    std::string ba_from, ba_d1, ba_to, ba_d2, ba_rels;
    br_analogy->add_option("--from", ba_from)->required();
    br_analogy->add_option("--d1", ba_d1)->required();
    br_analogy->add_option("--to", ba_to)->required();
    br_analogy->add_option("--d2", ba_d2)->required();
    br_analogy->add_option("--rels", ba_rels, "comma-separated; default: full out-signature");
    auto* br_intersect = cmd_bridge->add_subcommand("intersect", "concepts in both fibers");
    std::string bi_d1, bi_d2;
    br_intersect->add_option("--d1", bi_d1)->required();
    br_intersect->add_option("--d2", bi_d2)->required();
    auto* br_diff = cmd_bridge->add_subcommand("diff", "cross-session change records");
    std::string bd_d1, bd_d2, bd_rels;
    br_diff->add_option("--d1", bd_d1)->required();
    br_diff->add_option("--d2", bd_d2)->required();
    br_diff->add_option("--rels", bd_rels)->required();

    auto* cmd_save = app.add_subcommand("save", "write the kb as JSONL");
    std::string save_path;
    cmd_save->add_option("file", save_path)->required();

    auto* cmd_bench = app.add_subcommand("bench", "synthetic corpora and scaling runs");
    cmd_bench->require_subcommand(1);
    auto* bench_gen = cmd_bench->add_subcommand("generate", "deterministic synthetic corpus");
    std::string gen_spec, gen_out;
    bench_gen->add_option("--spec", gen_spec, "GenSpec JSON (inline or file)")->required();
    bench_gen->add_option("--out", gen_out, "write corpus JSONL here");
    auto* bench_scaling = cmd_bench->add_subcommand("scaling", "complexity scaling report");
    std::string grid_arg, csv_path;
    int sc_m = 4, sc_repeats = 3;
    bench_scaling->add_option("--grid", grid_arg, "ScalingGrid JSON (inline or file)");
    bench_scaling->add_option("-m", sc_m, "constraint count for the K sweep");
    bench_scaling->add_option("--repeats", sc_repeats);
    bench_scaling->add_option("--csv", csv_path, "write raw timings CSV here");

    auto* cmd_audit = app.add_subcommand("audit", "dump the audit log");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (app.get_subcommands().empty() && !end_session) {
        std::cerr << app.help() << "\n";
        return 2;
    }

    std::optional<SessionPaths> sp;
    if (!session_dir.empty()) {
        sp = SessionPaths{fs::path(session_dir)};
        std::error_code ec;
        fs::create_directories(sp->dir, ec);
        if (ec) fail(4, "IoError: cannot create " + sp->dir.string());
    }

    const bool is_load = app.got_subcommand(cmd_load);
    const bool active = sp && session_active(*sp);
    const bool have_kb_file = sp && fs::exists(sp->kb());

    if (sp && have_kb_file && !active && !is_load)
        fail(2, "session has ended; run `load` to start a new session");

    // knowledge base: session state first, then pre-freeze file loads
    cdc::KnowledgeBase kb;
    if (sp && have_kb_file) cdc::load_jsonl_into(kb, sp->kb());
    std::vector<std::string> post_files; // loaded after the freeze
    if (is_load && active) {
        post_files = load_files; // mid-session load: meta lines are rejected
    } else if (is_load) {
        for (const auto& f : load_files) cdc::load_jsonl_into(kb, f);
    }
    for (const auto& f : preload) {
        if (sp && active)
            post_files.push_back(f);
        else
            cdc::load_jsonl_into(kb, f);
    }

    // config: explicit flag wins; otherwise the session's stored config
    cdc::SessionConfig config;
    if (!config_path.empty()) {
        config = cdc::SessionConfig::from_json(load_json_file(config_path));
        if (sp) {
            std::ofstream out(sp->config(), std::ios::trunc);
            out << config.to_json().dump() << "\n";
        }
    } else if (sp && fs::exists(sp->config())) {
        config = cdc::SessionConfig::from_json(load_json_file(sp->config().string()));
    }

    cdc::Session session(std::move(kb), config);

    cdc::LoadStats post_stats;
    for (const auto& f : post_files) {
        cdc::LoadStats s = cdc::load_jsonl_into(session.kb(), f);
        post_stats.records += s.records;
        post_stats.bridges += s.bridges;
        post_stats.duplicates += s.duplicates;
        post_stats.rejected_meta += s.rejected_meta;
        post_stats.lines += s.lines;
    }

    int exit_code = 0;
    bool mutated = false;

    if (is_load) {
        mutated = true;
        emit(json{{"fibers", session.kb().fibers().size()},
                  {"knowledge_fibers", session.kb().knowledge_fiber_count()},
                  {"domains", session.kb().lattice().size()},
                  {"total_records", session.kb().total_records()},
                  {"bridges", session.kb().bridges().size()},
                  {"rejected_meta", post_stats.rejected_meta}});
    } else if (app.got_subcommand(cmd_insert)) {
        mutated = true;
        bool from_file = false;
        auto lines = input_lines(insert_input, from_file);
        std::vector<cdc::FourTuple> tuples;
        for (size_t i = 0; i < lines.size(); ++i) {
            try {
                auto rec = cdc::parse_record_line(lines[i]);
                if (!std::holds_alternative<cdc::FourTuple>(rec))
                    fail(from_file ? 4 : 2,
                         "insert takes four-tuples; use `bridge add` for bridge records");
                tuples.push_back(std::get<cdc::FourTuple>(rec));
            } catch (const cdc::Error& e) {
                fail(from_file ? 4 : 2,
                     insert_input + ":" + std::to_string(i + 1) + ": " + e.what());
            }
        }
        if (unchecked) {
            size_t added = 0, duplicates = 0;
            for (const auto& t : tuples) {
                try {
                    if (session.insert_unchecked(t) == cdc::AddResult::added)
                        ++added;
                    else
                        ++duplicates;
                } catch (const cdc::Error& e) {
                    if (e.code() != cdc::ErrorCode::MetaFrozen) throw;
                    cdc::ValidationOutcome out;
                    out.verdict = cdc::Verdict::rejected;
                    out.reason = cdc::RejectReason::meta_frozen;
                    emit(out.to_json());
                    exit_code = 3;
                    break;
                }
            }
            if (exit_code == 0) emit(json{{"added", added}, {"duplicates", duplicates}});
        } else {
            json results = json::array();
            for (const auto& t : tuples) {
                cdc::ValidationOutcome out = session.insert(t);
                if (!out.accepted()) exit_code = 3;
                results.push_back(out.to_json());
            }
            emit(results.size() == 1 ? results.front() : results);
        }
    } else if (app.got_subcommand(cmd_query)) {
        cdc::DomainPath d = domain_arg(q_domain);
        if (q_closure) {
            if (q_rel.empty() || (q_from.empty() && q_to.empty()))
                fail(2, "closure queries need --rel and --from or --to");
            std::set<std::string> reached;
            if (!q_from.empty()) {
                reached = cdc::closure(session.kb(), q_from, q_rel, d,
                                       cdc::Direction::forward, q_universal);
                if (!q_to.empty()) {
                    bool hit = reached.count(q_to) > 0;
                    reached.clear();
                    if (hit) reached.insert(q_to);
                }
            } else {
                reached = cdc::closure(session.kb(), q_to, q_rel, d,
                                       cdc::Direction::backward, q_universal);
            }
            emit(strings_to_json(reached));
        } else {
            cdc::Query q{q_from.empty() ? std::nullopt : std::optional(q_from),
                         q_rel.empty() ? std::nullopt : std::optional(q_rel),
                         q_to.empty() ? std::nullopt : std::optional(q_to),
                         d, false, q_universal};
            emit(tuples_to_json(cdc::match(session.kb(), q)));
        }
    } else if (app.got_subcommand(cmd_multi)) {
        cdc::DomainPath d = domain_arg(m_domain);
        std::vector<cdc::Constraint> constraints;
        for (const auto& s : m_constraints) constraints.push_back(constraint_arg(s));
        auto result = cdc::multi_constraint(session.kb(), d, constraints);
        emit(json{{"candidates", result.candidates},
                  {"counts", result.counts},
                  {"touched_records", result.touched_records}});
    } else if (app.got_subcommand(cmd_temporal)) {
        auto records = cdc::temporal_query(session.kb(), t_rel,
                                           domain_arg(t_before), domain_arg(t_scope));
        emit(tuples_to_json(records));
    } else if (app.got_subcommand(cmd_reindex)) {
        mutated = true;
        if (!r_domain.empty()) {
            size_t added = session.reindex_domain(domain_arg(r_domain));
            emit(json{{"added", {{r_domain, added}}}, {"total", added}});
        } else {
            cdc::ReindexReport report = session.reindex_all();
            emit(json{{"added", report.per_domain},
                      {"total", report.total_added},
                      {"passes", report.passes}});
        }
    } else if (app.got_subcommand(cmd_bridge)) {
        if (cmd_bridge->got_subcommand(br_add)) {
            mutated = true;
            bool from_file = false;
            auto lines = input_lines(br_input, from_file);
            json results = json::array();
            for (size_t i = 0; i < lines.size(); ++i) {
                try {
                    auto rec = cdc::parse_record_line(lines[i]);
                    if (!std::holds_alternative<cdc::BridgeRecord>(rec))
                        fail(from_file ? 4 : 2, "bridge add takes bridge records");
                    auto out = session.add_bridge(std::get<cdc::BridgeRecord>(rec));
                    if (!out.accepted) exit_code = 3;
                    results.push_back(json{{"accepted", out.accepted},
                                           {"reason", out.reason}});
                } catch (const cdc::Error& e) {
                    fail(from_file ? 4 : 2,
                         br_input + ":" + std::to_string(i + 1) + ": " + e.what());
                }
            }
            emit(results.size() == 1 ? results.front() : results);
        } else if (cmd_bridge->got_subcommand(br_analogy)) {
            cdc::DomainPath d1 = domain_arg(ba_d1), d2 = domain_arg(ba_d2);
            std::set<std::string> rels = ba_rels.empty()
                                             ? cdc::out_signature(session.kb(), ba_from, d1)
                                             : csv_arg(ba_rels);
            auto result = cdc::check_analogy(session.kb(), ba_from, d1, ba_to, d2, rels);
            json witness = json::array();
            for (const auto& w : result.witness)
                witness.push_back(json{w[0], w[1], w[2]});
            emit(json{{"holds", result.holds}, {"witness", witness}});
        } else if (cmd_bridge->got_subcommand(br_intersect)) {
            emit(strings_to_json(cdc::cross_fiber_intersection(
                session.kb(), domain_arg(bi_d1), domain_arg(bi_d2))));
        } else if (cmd_bridge->got_subcommand(br_diff)) {
            emit(tuples_to_json(cdc::cross_session_diff(
                session.kb(), domain_arg(bd_d1), domain_arg(bd_d2), csv_arg(bd_rels))));
        }
    } else if (app.got_subcommand(cmd_save)) {
        size_t lines = cdc::save_jsonl(session.kb(), save_path);
        emit(json{{"lines", lines}});
    } else if (app.got_subcommand(cmd_bench)) {
        if (cmd_bench->got_subcommand(bench_gen)) {
            cdc::GenSpec spec;
            try {
                spec = cdc::GenSpec::from_json(json_arg(gen_spec));
            } catch (const cdc::Error& e) {
                fail(2, e.what());
            } catch (const json::exception& e) {
                fail(2, std::string("bad GenSpec: ") + e.what());
            }
            cdc::GeneratedCorpus corpus = cdc::generate(spec);
            if (!gen_out.empty())
                cdc::save_jsonl(corpus.to_kb(), gen_out);
            emit(corpus.manifest());
        } else {
            cdc::ScalingGrid grid;
            if (!grid_arg.empty()) grid = cdc::ScalingGrid::from_json(json_arg(grid_arg));
            cdc::ScalingReport report =
                cdc::measure_scaling(grid, static_cast<size_t>(sc_m),
                                     static_cast<size_t>(sc_repeats));
            if (!csv_path.empty()) {
                std::ofstream out(csv_path, std::ios::trunc);
                if (!out) fail(4, "IoError: cannot write " + csv_path);
                out << report.to_csv();
            }
            emit(report.to_json());
        }
    } else if (app.got_subcommand(cmd_audit)) {
        if (sp && fs::exists(sp->audit())) {
            std::ifstream in(sp->audit());
            json arr = json::array();
            std::string line;
            while (std::getline(in, line)) {
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                json j = json::parse(line, nullptr, false);
                if (j.is_discarded())
                    fail(4, "ParseError: corrupt audit line in " + sp->audit().string());
                arr.push_back(std::move(j));
            }
            emit(arr);
        } else {
            emit(session.audit().to_json());
        }
    }

    if (sp) {
        if (mutated) {
            cdc::save_jsonl(session.kb(), sp->kb());
            append_audit(*sp, session.audit());
        }
        if (mutated || end_session || is_load)
            write_state(*sp, !end_session);
    }
    return exit_code;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliExit& e) {
        if (!e.message.empty()) std::cerr << e.message << "\n";
        return e.code;
    } catch (const cdc::Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
            // errors escaping to here with these codes come from input files
            case cdc::ErrorCode::IoError:
            case cdc::ErrorCode::ParseError:
            case cdc::ErrorCode::MalformedTuple:
            case cdc::ErrorCode::ConflictingTyping:
                return 4;
            case cdc::ErrorCode::MetaFrozen:
                return 3;
            default:
                return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

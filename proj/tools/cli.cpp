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

#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <shockhash/errors.hpp>
#include <shockhash/experiments.hpp>
#include <shockhash/recsplit.hpp>

namespace shockhash::cli {

namespace {

    namespace ex = shockhash::experiments;
    using Clock = std::chrono::steady_clock;

    //! Failure with a chosen exit code
    struct CliError {
        int code;
        std::string message;
    };

    struct KeySource {
        std::string input;
        std::uint64_t synthetic{0};
        std::uint64_t gen_seed{42};

        [[nodiscard]] bool given() const { return !input.empty() || synthetic != 0; }
    };

    struct BuildOptions {
        std::uint32_t b{2000};
        unsigned n{30};
        std::string mode{"rotate"};
        unsigned threads{1};
    };

    void add_key_source(CLI::App* cmd, KeySource& src, bool required) {
        auto* input = cmd->add_option("--input", src.input, "newline-delimited key file");
        auto* synthetic = cmd->add_option("--synthetic", src.synthetic, "number of synthetic keys instead of a file");
        input->excludes(synthetic);
        synthetic->excludes(input);
        cmd->add_option("--gen-seed", src.gen_seed, "synthetic key generator seed")->capture_default_str();
        if (required) {
            cmd->callback([input, synthetic] {
                if (input->count() == 0 && synthetic->count() == 0) {
                    throw CLI::ValidationError("keys", "one of --input or --synthetic is required");
                }
            });
        }
    }

    void add_build_options(CLI::App* cmd, BuildOptions& opt) {
        cmd->add_option("--b", opt.b, "expected bucket size")->capture_default_str();
        cmd->add_option("--n", opt.n, "leaf size (1..64)")->capture_default_str();
        cmd->add_option("--mode", opt.mode, "leaf search: plain | rotate | rotate-cached")
            ->check(CLI::IsMember({"plain", "rotate", "rotate-cached"}))
            ->capture_default_str();
        cmd->add_option("--threads", opt.threads, "bucket construction threads")->capture_default_str();
    }

    BuildConfig to_config(const BuildOptions& opt) {
        BuildConfig c;
        c.bucket_size = opt.b;
        c.leaf_size = opt.n;
        c.mode = *parse_leaf_mode(opt.mode);
        c.threads = opt.threads;
        try {
            c.validate();
        } catch (const InvalidParameter& e) {
            throw CliError{kUsage, e.what()};
        }
        return c;
    }

    std::vector<std::string> read_keys(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw CliError{kIo, "cannot open key file " + path};
        std::vector<std::string> keys;
        std::string line;
        while (std::getline(in, line)) keys.push_back(line);
        if (in.bad()) throw CliError{kIo, "error reading key file " + path};
        return keys;
    }

    std::vector<std::string> load_keys(const KeySource& src) {
        if (!src.input.empty()) return read_keys(src.input);
        return synthetic_keys(src.gen_seed, src.synthetic);
    }

    std::vector<std::byte> read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw CliError{kIo, "cannot open descriptor " + path};
        std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (in.bad()) throw CliError{kIo, "error reading descriptor " + path};
        std::vector<std::byte> bytes(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) bytes[i] = static_cast<std::byte>(raw[i]);
        return bytes;
    }

    void write_file(const std::string& path, const std::vector<std::byte>& bytes) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw CliError{kIo, "cannot open " + path + " for writing"};
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw CliError{kIo, "error writing " + path};
    }

    Mphf load_descriptor(const std::string& path) {
        const std::vector<std::byte> bytes = read_file(path);
        try {
            return Mphf::deserialize(bytes);
        } catch (const FormatError& e) {
            throw CliError{kOther, "malformed descriptor " + path + ": " + e.what()};
        }
    }

    Mphf build_or_fail(const std::vector<std::string>& keys, const BuildConfig& config, BuildReport* report) {
        try {
            return Mphf::build(keys, config, report);
        } catch (const DuplicateKey& e) {
            throw CliError{kDuplicateKey, "duplicate key at lines " + std::to_string(e.first_index + 1) + " and " +
                                              std::to_string(e.second_index + 1)};
        }
    }

    void print_space(std::ostream& out, const Mphf& mphf) {
        const SpaceReport s = mphf.stats();
        const double keys = std::max<double>(1.0, static_cast<double>(s.keys));
        out << std::fixed << std::setprecision(4);
        out << "keys              " << s.keys << "\n";
        out << "config            n=" << mphf.leaf_size() << " b=" << mphf.bucket_size() << " mode=" << to_string(mphf.mode())
            << "\n";
        out << "total bits        " << s.total_bits << "\n";
        out << "bits/key          " << s.bits_per_key() << "\n";
        out << "  header          " << static_cast<double>(s.header_bits) / keys << "\n";
        out << "  bucket offsets  " << static_cast<double>(s.offset_bits) / keys << "\n";
        out << "  seed stream     " << static_cast<double>(s.seed_bits) / keys << "\n";
        out << "  retrieval       " << static_cast<double>(s.retrieval_bits) / keys << "\n";
        out.unsetf(std::ios::floatfield);
        out << std::setprecision(6);
    }

    void print_report(std::ostream& out, const BuildReport& r, unsigned n, std::uint64_t keys) {
        out << std::fixed << std::setprecision(3);
        out << "construction s    " << r.total_seconds << " (hash " << r.hash_seconds << ", buckets " << r.bucket_seconds
            << ", retrieval " << r.retrieval_seconds << ")\n";
        out << "keys/second       " << std::setprecision(0)
            << (r.total_seconds > 0 ? static_cast<double>(keys) / r.total_seconds : 0.0) << "\n";
        out << std::setprecision(4);
        out << "leaves            " << r.leaves << " (" << r.full_leaves << " of size " << n << ")\n";
        out << "leaf overhead     " << r.idealized_leaf_overhead(n) << " bits (idealized, full leaves)\n";
        out.unsetf(std::ios::floatfield);
        out << std::setprecision(6);
    }

    //! "a", "a..b", "a..b:step" or a comma-separated list of those
    std::vector<unsigned> parse_range(const std::string& text) {
        std::vector<unsigned> values;
        std::stringstream list(text);
        std::string item;
        const auto number = [&](const std::string& s) {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || s.empty()) throw CliError{kUsage, "bad number '" + s + "' in range " + text};
            return static_cast<unsigned>(v);
        };
        while (std::getline(list, item, ',')) {
            const auto dots = item.find("..");
            if (dots == std::string::npos) {
                values.push_back(number(item));
                continue;
            }
            const auto colon = item.find(':', dots);
            const unsigned lo = number(item.substr(0, dots));
            const unsigned hi = number(item.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
            const unsigned step = colon == std::string::npos ? 1 : number(item.substr(colon + 1));
            if (step == 0 || lo > hi) throw CliError{kUsage, "bad range " + item};
            for (unsigned v = lo; v <= hi; v += step) values.push_back(v);
        }
        if (values.empty()) throw CliError{kUsage, "empty range"};
        return values;
    }

    //! CSV goes to --csv when given, else to standard output
    class CsvSink {
      public:
        CsvSink(const std::string& path, std::ostream& fallback, bool append = false) : out_(&fallback) {
            if (path.empty()) return;
            fresh_ = !append || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
            file_.open(path, append ? std::ios::app : std::ios::trunc);
            if (!file_) throw CliError{kIo, "cannot open " + path + " for writing"};
            out_ = &file_;
        }

        std::ostream& stream() { return *out_; }
        //! False when appending to a file that already has rows
        [[nodiscard]] bool fresh() const { return fresh_; }

      private:
        bool fresh_{true};
        std::ofstream file_;
        std::ostream* out_;
    };

    int cmd_build(const KeySource& src, const BuildOptions& opt, const std::string& out_path, std::ostream& out) {
        const BuildConfig config = to_config(opt);
        const std::vector<std::string> keys = load_keys(src);
        BuildReport report;
        const Mphf mphf = build_or_fail(keys, config, &report);
        write_file(out_path, mphf.serialize());
        print_space(out, mphf);
        print_report(out, report, config.leaf_size, keys.size());
        return kOk;
    }

    int cmd_query(const std::string& desc, const KeySource& src, const std::vector<std::string>& extra,
                  std::ostream& out) {
        const Mphf mphf = load_descriptor(desc);
        std::vector<std::string> keys = src.given() ? load_keys(src) : std::vector<std::string>{};
        keys.insert(keys.end(), extra.begin(), extra.end());
        for (const std::string& k : keys) out << k << '\t' << mphf.query(k) << '\n';
        return kOk;
    }

    int cmd_verify(const std::string& desc, const KeySource& src, std::ostream& out, std::ostream& err) {
        const Mphf mphf = load_descriptor(desc);
        const std::vector<std::string> keys = load_keys(src);
        const VerifyResult r = mphf.verify(keys);
        if (r.ok) {
            out << "verify ok: " << keys.size() << " keys map onto [0, " << mphf.size() << ")\n";
            return kOk;
        }
        err << "verify failed: " << r.message;
        if (r.offending_key) {
            err << " (key at line " << *r.offending_key + 1;
            if (*r.offending_key < keys.size() && keys[*r.offending_key].size() <= 80) {
                err << ": \"" << keys[*r.offending_key] << "\"";
            }
            err << ")";
        }
        err << "\n";
        return kVerifyFailed;
    }

    int cmd_stats(const std::string& desc, std::ostream& out) {
        print_space(out, load_descriptor(desc));
        return kOk;
    }

    int cmd_bench(const KeySource& src, const BuildOptions& opt, std::uint64_t reps, const std::string& csv,
                  std::ostream& out) {
        const BuildConfig config = to_config(opt);
        const std::vector<std::string> keys = load_keys(src);
        BuildReport report;
        const Mphf mphf = build_or_fail(keys, config, &report);
        std::vector<HashedKey> hashed(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) hashed[i] = master_hash(keys[i]);
        std::uint64_t checksum = 0;
        const auto start = Clock::now();
        for (std::uint64_t r = 0; r < reps; ++r) {
            for (const HashedKey& k : hashed) checksum += mphf.query(k);
        }
        const double query_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        const double queries = static_cast<double>(reps) * static_cast<double>(keys.size());
        const double ns_per_query = queries > 0 ? query_seconds * 1e9 / queries : 0.0;

        print_space(out, mphf);
        print_report(out, report, config.leaf_size, keys.size());
        out << std::fixed << std::setprecision(1) << "query ns/key      " << ns_per_query << " (checksum " << checksum
            << ")\n";
        out.unsetf(std::ios::floatfield);
        if (!csv.empty()) {
            CsvSink sink(csv, out, true);
            if (sink.fresh()) sink.stream() << "keys,n,b,mode,bits_per_key,build_s,build_ns_per_key,query_ns_per_key\n";
            sink.stream() << keys.size() << ',' << config.leaf_size << ',' << config.bucket_size << ','
                          << to_string(config.mode) << ',' << std::setprecision(10) << mphf.stats().bits_per_key()
                          << ',' << report.total_seconds << ','
                          << (keys.empty() ? 0.0 : report.total_seconds * 1e9 / static_cast<double>(keys.size()))
                          << ',' << ns_per_query << '\n';
        }
        return kOk;
    }

    int cmd_trials(const std::string& range, const std::string& mode_name, std::uint64_t reps, std::uint64_t seed,
                   const std::string& csv, std::ostream& out) {
        ex::TrialMode mode{};
        if (!ex::parse_trial_mode(mode_name, mode)) throw CliError{kUsage, "unknown mode " + mode_name};
        std::vector<ex::TrialStats> rows;
        try {
            for (const unsigned n : parse_range(range)) rows.push_back(ex::trial_statistics(n, mode, reps, seed));
        } catch (const InvalidParameter& e) {
            throw CliError{kUsage, e.what()};
        }
        CsvSink sink(csv, out);
        ex::write_trial_csv(sink.stream(), rows);
        return kOk;
    }

    int cmd_filter(const std::string& range, std::uint64_t trials, std::uint64_t seed, const std::string& csv,
                   std::ostream& out) {
        CsvSink sink(csv, out);
        std::ostream& s = sink.stream();
        s << "n,trials,pass_rate,std_error,exact,upper_bound\n" << std::setprecision(10);
        for (const unsigned n : parse_range(range)) {
            if (n == 0 || n > kMaxLeafSize) throw CliError{kUsage, "filter experiment needs 1 <= n <= 64"};
            const ex::Estimate e = ex::mc_filter_pass(n, trials, seed);
            s << n << ',' << trials << ',' << e.mean << ',' << e.std_error << ','
              << ex::filter_pass_exact(n, ex::GraphModel::distinct_pair) << ',' << ex::filter_pass_bound(n) << '\n';
        }
        return kOk;
    }

    int cmd_enumerate(const std::string& range, const std::string& csv, std::ostream& out) {
        CsvSink sink(csv, out);
        std::ostream& s = sink.stream();
        s << "n,outcomes,pseudoforests,probability,probability_value,bound_trees,bound_orientable,mean_orientations,"
             "closed_form,conditional_orientations\n"
          << std::setprecision(10);
        for (const unsigned n : parse_range(range)) {
            if (n == 0 || n > ex::kMaxEnumerationSize) throw CliError{kUsage, "enumeration needs 1 <= n <= 5"};
            const ex::EnumerationResult r = ex::enumerate_outcomes(n);
            const ex::Fraction p = r.pseudoforest_probability();
            const ex::Fraction mean = r.mean_orientations();
            const ex::Fraction closed = ex::mean_orientations_closed_form(n);
            s << n << ',' << r.outcomes << ',' << r.pseudoforests << ',' << p.num << '/' << p.den << ','
              << static_cast<double>(p.value()) << ',' << ex::pseudoforest_bound_trees(n) << ','
              << ex::pseudoforest_bound_orientable(n) << ',' << mean.num << '/' << mean.den << ',' << closed.num << '/'
              << closed.den << ',' << static_cast<double>(r.conditional_orientations().value()) << '\n';
        }
        return kOk;
    }

    int cmd_components(const std::string& range, std::uint64_t trials, std::uint64_t seed, const std::string& csv,
                       std::ostream& out) {
        CsvSink sink(csv, out);
        std::ostream& s = sink.stream();
        s << "n,trials,mc_mean,std_error,exact,upper_bound\n" << std::setprecision(10);
        for (const unsigned n : parse_range(range)) {
            if (n == 0) throw CliError{kUsage, "n must be positive"};
            const ex::Estimate e = ex::mc_component_factor(n, trials, seed);
            s << n << ',' << trials << ',' << e.mean << ',' << e.std_error << ',' << ex::component_factor_exact(n)
              << ',' << ex::component_factor_bound(n) << '\n';
        }
        return kOk;
    }

    int cmd_orientations(const std::string& range, std::uint64_t trials, std::uint64_t seed, const std::string& csv,
                         std::ostream& out) {
        CsvSink sink(csv, out);
        std::ostream& s = sink.stream();
        s << "n,trials,pseudoforests,mean_orientations_given_pseudoforest,std_error\n" << std::setprecision(10);
        for (const unsigned n : parse_range(range)) {
            if (n == 0 || n > kMaxLeafSize) throw CliError{kUsage, "orientation experiment needs 1 <= n <= 64"};
            const ex::Estimate e = ex::mc_conditional_orientations(n, trials, seed);
            s << n << ',' << trials << ',' << e.trials << ',' << e.mean << ',' << e.std_error << '\n';
        }
        return kOk;
    }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ShockHash-RS minimal perfect hashing: build, query, verify, benchmark, experiments"};
    app.require_subcommand(1);

    KeySource src;
    BuildOptions opt;
    std::string desc;
    std::string out_path;
    std::string csv;
    std::uint64_t reps = 1;
    std::vector<std::string> extra_keys;

    auto* build = app.add_subcommand("build", "build a descriptor from keys");
    add_key_source(build, src, true);
    add_build_options(build, opt);
    build->add_option("--out", out_path, "descriptor output path")->required();

    auto* query = app.add_subcommand("query", "print the value of each key");
    query->add_option("--desc", desc, "descriptor path")->required();
    add_key_source(query, src, false);
    query->add_option("--key", extra_keys, "a key to query (repeatable)");

    auto* verify = app.add_subcommand("verify", "check a descriptor against its key set");
    verify->add_option("--desc", desc, "descriptor path")->required();
    add_key_source(verify, src, true);

    auto* stats = app.add_subcommand("stats", "space decomposition of a descriptor");
    stats->add_option("--desc", desc, "descriptor path")->required();

    auto* bench = app.add_subcommand("bench", "build and time queries");
    add_key_source(bench, src, true);
    add_build_options(bench, opt);
    bench->add_option("--reps", reps, "query passes over all keys")->capture_default_str();
    bench->add_option("--csv", csv, "append a CSV row to this file");

    auto* experiment = app.add_subcommand("experiment", "run an experiment and emit CSV");
    experiment->require_subcommand(1);
    std::string r_trials = "6..20", r_filter = "16", r_enumerate = "1..5", r_components = "8,32,128",
                r_orient = "4..16:4";
    std::string trial_mode = "plain";
    std::uint64_t exp_seed = 1;
    std::uint64_t trials = 0;
    std::uint64_t trial_reps = 10000;

    const auto common = [&](CLI::App* cmd, std::string& range) {
        cmd->add_option("--n", range, "leaf sizes: a, a..b, a..b:step, comma lists")->capture_default_str();
        cmd->add_option("--csv", csv, "CSV output path (default: standard output)");
        cmd->add_option("--experiment-seed", exp_seed, "seed of all randomness")->capture_default_str();
    };
    auto* e_trials = experiment->add_subcommand("trials", "mean successful seed per leaf size");
    common(e_trials, r_trials);
    e_trials->add_option("--mode", trial_mode, "brute-force | plain | rotate | rotate-cached")
        ->check(CLI::IsMember({"brute-force", "plain", "rotate", "rotate-cached"}))
        ->capture_default_str();
    e_trials->add_option("--reps", trial_reps, "leaves per leaf size")->capture_default_str();
    auto* e_filter = experiment->add_subcommand("filter", "coverage filter pass rate");
    common(e_filter, r_filter);
    e_filter->add_option("--trials", trials, "seeds per leaf size (default 1000000)");
    auto* e_enumerate = experiment->add_subcommand("enumerate", "exact enumeration for n <= 5");
    common(e_enumerate, r_enumerate);
    auto* e_components = experiment->add_subcommand("components", "E[2^c] of the 2-regular configuration model");
    common(e_components, r_components);
    e_components->add_option("--trials", trials, "random matchings per n (default 100000)");
    auto* e_orient = experiment->add_subcommand("orientations", "E[2^c | pseudoforest] of leaf hash graphs");
    common(e_orient, r_orient);
    e_orient->add_option("--trials", trials, "random leaves per n (default 100000)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (build->parsed()) return cmd_build(src, opt, out_path, out);
        if (query->parsed()) return cmd_query(desc, src, extra_keys, out);
        if (verify->parsed()) return cmd_verify(desc, src, out, err);
        if (stats->parsed()) return cmd_stats(desc, out);
        if (bench->parsed()) return cmd_bench(src, opt, reps, csv, out);
        if (e_trials->parsed()) return cmd_trials(r_trials, trial_mode, trial_reps, exp_seed, csv, out);
        if (e_filter->parsed()) return cmd_filter(r_filter, trials == 0 ? 1000000 : trials, exp_seed, csv, out);
        if (e_enumerate->parsed()) return cmd_enumerate(r_enumerate, csv, out);
        if (e_components->parsed()) return cmd_components(r_components, trials == 0 ? 100000 : trials, exp_seed, csv, out);
        if (e_orient->parsed()) return cmd_orientations(r_orient, trials == 0 ? 100000 : trials, exp_seed, csv, out);
    } catch (const CliError& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kOther;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return kOther;
    }
    return kUsage;
}

}  // namespace shockhash::cli

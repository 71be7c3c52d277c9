// Command-line front end for the chaotic-encryption + LSB steganography
// pipeline: keygen, hide, reveal, analyze, keyspace.
//
// Exit codes: 0 success, 1 usage error, 2 capacity exceeded,
//             3 key validation error, 4 I/O or format error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaosteg/chaosteg.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed key material is a key error (exit 3), unlike other parse
// failures which stay format errors (exit 4).
chaosteg::ChaoticKey load_key_checked(const std::string& path) {
    try {
        return chaosteg::load_key(path);
    } catch (const chaosteg::ParseError& e) {
        throw chaosteg::KeyError(std::string("malformed key file: ") + e.what());
    }
}

chaosteg::BitPlan parse_plan_spec(const std::string& spec, int cover_channels) {
    std::vector<int> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            parts.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--plan expects comma-separated integers, got '" + spec + "'");
        }
    }
    if (cover_channels == 1) {
        if (parts.size() != 1)
            throw UsageError("--plan for a grayscale cover takes one value, e.g. --plan 3");
        try {
            return chaosteg::BitPlan::gray(parts[0]);
        } catch (const chaosteg::Error& e) {
            throw UsageError(e.what());
        }
    }
    if (parts.size() != 3)
        throw UsageError("--plan for an RGB cover takes three values, e.g. --plan 1,1,1");
    try {
        return chaosteg::BitPlan::rgb(parts[0], parts[1], parts[2]);
    } catch (const chaosteg::Error& e) {
        throw UsageError(e.what());
    }
}

chaosteg::BitPlan plan_from_flags(std::optional<int> bpp,
                                  const std::string& plan_spec,
                                  int cover_channels) {
    if (bpp && !plan_spec.empty())
        throw UsageError("give either --bpp or --plan, not both");
    if (!plan_spec.empty())
        return parse_plan_spec(plan_spec, cover_channels);
    if (bpp) {
        try {
            return chaosteg::BitPlan::preset(*bpp, cover_channels);
        } catch (const chaosteg::Error& e) {
            throw UsageError(e.what());
        }
    }
    throw UsageError("an embedding rate is required: --bpp 3|6|8 or --plan r,g,b");
}

std::string format_db(double v) {
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

int cmd_keygen(const std::string& out_path, std::optional<std::uint64_t> seed,
               int block_size) {
    if (block_size < 1)
        throw UsageError("--block-size must be >= 1");
    std::mt19937_64 rng(seed ? *seed : std::random_device{}());
    const chaosteg::ChaoticKey key = chaosteg::random_key(rng, block_size);
    chaosteg::save_key(key, out_path);
    std::cout << "wrote key: " << out_path << "\n";
    return 0;
}

int cmd_hide(const std::string& cover_path, const std::string& secret_path,
             const std::string& key_path, std::optional<int> bpp,
             const std::string& plan_spec, const std::string& out_path,
             const std::string& manifest_path, const std::string& encrypted_path) {
    const chaosteg::ImageBuffer cover = chaosteg::load_image(cover_path);
    const chaosteg::ImageBuffer secret = chaosteg::load_image(secret_path);
    const chaosteg::ChaoticKey key = load_key_checked(key_path);
    const chaosteg::BitPlan plan = plan_from_flags(bpp, plan_spec, cover.channels);

    const chaosteg::HideResult result = chaosteg::hide(cover, secret, key, plan);
    chaosteg::save_image(result.stego, out_path);
    chaosteg::save_manifest(result.manifest, manifest_path);
    if (!encrypted_path.empty())
        chaosteg::save_image(result.encrypted_secret, encrypted_path);

    std::cout << "stego PSNR: " << format_db(chaosteg::psnr(cover, result.stego))
              << " dB\n";
    return 0;
}

int cmd_reveal(const std::string& stego_path, const std::string& key_path,
               const std::string& manifest_path, const std::string& out_path) {
    const chaosteg::ImageBuffer stego = chaosteg::load_image(stego_path);
    const chaosteg::ChaoticKey key = load_key_checked(key_path);
    const chaosteg::StegoManifest manifest = chaosteg::load_manifest(manifest_path);
    const chaosteg::ImageBuffer secret = chaosteg::reveal(stego, key, manifest);
    chaosteg::save_image(secret, out_path);
    std::cout << "recovered secret: " << out_path << "\n";
    return 0;
}

int cmd_analyze(const std::string& a_path, const std::string& b_path,
                const std::string& report_path, const std::string& hist_a_path,
                const std::string& hist_b_path, const std::string& diff_path) {
    const chaosteg::ImageBuffer a = chaosteg::load_image(a_path);
    const chaosteg::ImageBuffer b = chaosteg::load_image(b_path);
    const chaosteg::QualityReport report = chaosteg::compare_images(a, b);

    std::ofstream out(report_path, std::ios::trunc);
    if (!out)
        throw chaosteg::IoError("cannot open file for writing: " + report_path);
    chaosteg::write_report_csv(out, report);
    if (!out.flush())
        throw chaosteg::IoError("write failed: " + report_path);

    const auto dump_hist = [](const chaosteg::ImageBuffer& img, const std::string& path) {
        if (path.empty())
            return;
        std::ofstream hout(path, std::ios::trunc);
        if (!hout)
            throw chaosteg::IoError("cannot open file for writing: " + path);
        chaosteg::write_histogram_csv(hout, chaosteg::histogram(img));
        if (!hout.flush())
            throw chaosteg::IoError("write failed: " + path);
    };
    dump_hist(a, hist_a_path);
    dump_hist(b, hist_b_path);
    if (!diff_path.empty())
        chaosteg::save_image(chaosteg::diff_image(a, b), diff_path);

    chaosteg::write_report_text(std::cout, report);
    return 0;
}

int cmd_keyspace(const std::string& key_path, double precision) {
    if (!(precision > 0.0 && precision < 1.0))
        throw UsageError("--precision must be in (0, 1)");
    (void)load_key_checked(key_path); // six real components by convention
    const int components = 6;
    const double bits = chaosteg::key_space_bits(components, precision);
    const double decimal_digits = bits * std::log10(2.0);
    char line[128];
    std::snprintf(line, sizeof(line), "key space: %.1f bits (~10^%.0f)", bits,
                  decimal_digits);
    std::cout << "key components: " << components << "\n";
    std::printf("assumed precision: %g\n", precision);
    std::cout << line << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chaotic image encryption + LSB steganography"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "Generate a random key file");
    std::string kg_out;
    std::optional<std::uint64_t> kg_seed;
    int kg_block_size = 16;
    keygen->add_option("--out", kg_out, "Key file to write")->required();
    keygen->add_option("--seed", kg_seed, "Deterministic RNG seed");
    keygen->add_option("--block-size", kg_block_size, "Scramble block side, pixels");

    // hide
    auto* hide = app.add_subcommand("hide", "Encrypt a secret image and embed it");
    std::string h_cover, h_secret, h_key, h_plan, h_out, h_manifest, h_enc;
    std::optional<int> h_bpp;
    hide->add_option("--cover", h_cover, "Lossless cover image")->required();
    hide->add_option("--secret", h_secret, "Secret image to hide")->required();
    hide->add_option("--key", h_key, "Key file")->required();
    hide->add_option("--bpp", h_bpp, "Embedding rate preset (3, 6, or 8)");
    hide->add_option("--plan", h_plan, "Per-channel bits, e.g. 1,1,1");
    hide->add_option("--out", h_out, "Stego image to write")->required();
    hide->add_option("--manifest", h_manifest, "Manifest file to write")->required();
    hide->add_option("--emit-encrypted", h_enc, "Also write the encrypted secret");

    // reveal
    auto* reveal = app.add_subcommand("reveal", "Extract and decrypt a hidden image");
    std::string r_stego, r_key, r_manifest, r_out;
    reveal->add_option("stego", r_stego, "Stego image")->required();
    reveal->add_option("--key", r_key, "Key file")->required();
    reveal->add_option("--manifest", r_manifest, "Manifest file")->required();
    reveal->add_option("--out", r_out, "Recovered secret image to write")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compare two images");
    std::string a_first, a_second, a_report, a_hist_a, a_hist_b, a_diff;
    analyze->add_option("image_a", a_first, "First image (e.g. cover)")->required();
    analyze->add_option("image_b", a_second, "Second image (e.g. stego)")->required();
    analyze->add_option("--out", a_report, "Report CSV to write")->required();
    analyze->add_option("--hist-a", a_hist_a, "Histogram dump of image_a");
    analyze->add_option("--hist-b", a_hist_b, "Histogram dump of image_b");
    analyze->add_option("--diff-image", a_diff, "Amplified |a-b| image");

    // keyspace
    auto* keyspace = app.add_subcommand("keyspace", "Report brute-force key space");
    std::string ks_key;
    double ks_precision = 1e-15;
    keyspace->add_option("key", ks_key, "Key file")->required();
    keyspace->add_option("--precision", ks_precision, "Assumed numeric precision");

    try {
        app.parse(argc, argv);
        if (keygen->parsed())
            return cmd_keygen(kg_out, kg_seed, kg_block_size);
        if (hide->parsed())
            return cmd_hide(h_cover, h_secret, h_key, h_bpp, h_plan, h_out,
                            h_manifest, h_enc);
        if (reveal->parsed())
            return cmd_reveal(r_stego, r_key, r_manifest, r_out);
        if (analyze->parsed())
            return cmd_analyze(a_first, a_second, a_report, a_hist_a, a_hist_b, a_diff);
        if (keyspace->parsed())
            return cmd_keyspace(ks_key, ks_precision);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const chaosteg::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chaosteg::KeyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const chaosteg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

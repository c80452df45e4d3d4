// Command-line front end: simulate, mask, complete, image, metrics,
// experiment, noise. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 solver non-convergence.

#include <CLI11.hpp>
#include <iostream>

#include "isar/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISAR missing-data reconstruction toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Render a point-scatterer scene to a CISR echo matrix");
    std::string sim_scene, sim_out;
    sim->add_option("--scene", sim_scene, "scene description file")->required();
    sim->add_option("--out", sim_out, "output CISR path")->required();

    // mask
    auto* msk = app.add_subcommand("mask", "Generate an observation mask");
    std::string msk_kind = "pixel", msk_out;
    double msk_ratio = 0.5;
    std::size_t msk_rows = 0, msk_cols = 0;
    std::uint64_t msk_seed = 0;
    msk->add_option("--kind", msk_kind, "pixel|column|compressed");
    msk->add_option("--ratio", msk_ratio, "missing ratio in [0,1)")->required();
    msk->add_option("--rows", msk_rows)->required();
    msk->add_option("--cols", msk_cols)->required();
    msk->add_option("--seed", msk_seed);
    msk->add_option("--out", msk_out, "output mask path")->required();

    // complete
    auto* cmp = app.add_subcommand("complete", "Complete a masked matrix");
    std::string cmp_method, cmp_in, cmp_mask, cmp_out;
    isar::SolverConfig solver;
    isar::DipConfig dip;
    std::uint64_t cmp_seed = 0;
    std::vector<std::size_t> dip_channels;
    cmp->add_option("--method", cmp_method, "zero-fill|nnm|ialm|dip")->required();
    cmp->add_option("--in", cmp_in, "input CISR path")->required();
    cmp->add_option("--mask", cmp_mask, "mask path")->required();
    cmp->add_option("--out", cmp_out, "output CISR path")->required();
    cmp->add_option("--max-iters", solver.max_iters);
    cmp->add_option("--tol", solver.tol);
    cmp->add_option("--tau", solver.tau);
    cmp->add_option("--delta", solver.delta);
    cmp->add_option("--seed", cmp_seed, "seed for dip / pre-transformation");
    cmp->add_option("--dip-max-iters", dip.max_iters);
    cmp->add_option("--dip-lr", dip.lr);
    cmp->add_option("--dip-channels", dip_channels, "per-stage widths")->delimiter(',');

    // image
    auto* img = app.add_subcommand("image", "Form the range-Doppler image and write a dB raster");
    std::string img_in, img_out;
    double img_top_db = 20.0;
    bool img_shift = false;
    img->add_option("--in", img_in, "input CISR path")->required();
    img->add_option("--out", img_out, "output PGM path")->required();
    img->add_option("--top-db", img_top_db, "dynamic range in dB");
    img->add_flag("--shift", img_shift, "center pixel (0,0)");

    // metrics
    auto* met = app.add_subcommand("metrics", "Score an estimate against a reference matrix");
    std::string met_ref, met_est;
    bool met_raw = false;
    met->add_option("--ref", met_ref, "reference CISR path")->required();
    met->add_option("--est", met_est, "estimate CISR path")->required();
    met->add_flag("--raw", met_raw, "score the matrices directly instead of their images");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run the full method/scenario/ratio/seed grid");
    std::string exp_cfg;
    bool exp_single = false;
    exp->add_option("--config", exp_cfg, "experiment config file")->required();
    exp->add_flag("--single-thread", exp_single, "bit-exact sequential execution");

    // noise
    auto* noi = app.add_subcommand("noise", "Add circular complex Gaussian noise at a target SNR");
    std::string noi_in, noi_out;
    double noi_snr = 30.0;
    std::uint64_t noi_seed = 0;
    noi->add_option("--in", noi_in)->required();
    noi->add_option("--out", noi_out)->required();
    noi->add_option("--snr-db", noi_snr)->required();
    noi->add_option("--seed", noi_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sim) {
            isar::save_matrix(isar::simulate_echo(isar::load_scene(sim_scene)), sim_out);
        } else if (*msk) {
            isar::save_mask(isar::gen_mask(isar::mask_kind_from_name(msk_kind), msk_ratio,
                                           msk_rows, msk_cols, msk_seed),
                            msk_out);
        } else if (*cmp) {
            const auto m = isar::load_matrix(cmp_in);
            const auto mask = isar::load_mask(cmp_mask);
            const auto method = isar::method_from_name(cmp_method);
            const auto observed = isar::apply_mask(m, mask);
            bool converged = true;
            isar::ComplexMatrix completed;
            switch (method) {
                case isar::Method::zero_fill:
                    completed = observed;
                    break;
                case isar::Method::nnm: {
                    isar::ComplexMatrix work = observed;
                    isar::Mask work_mask = mask;
                    std::optional<isar::Permutation> perm;
                    if (mask.kind != isar::MaskKind::pixel) {
                        auto pre = isar::pretransform(observed, mask, cmp_seed);
                        work = std::move(pre.matrix);
                        work_mask = std::move(pre.mask);
                        perm = std::move(pre.perm);
                    }
                    isar::RealMatrix re, im;
                    isar::split_complex(work, re, im);
                    auto r1 = isar::complete_nnm(re, work_mask, solver);
                    auto r2 = isar::complete_nnm(im, work_mask, solver);
                    completed = isar::merge_complex(r1.z, r2.z);
                    if (perm) completed = isar::invert_pretransform(completed, *perm);
                    converged = r1.converged && r2.converged;
                    break;
                }
                case isar::Method::ialm: {
                    auto r = isar::complete_ialm(observed, mask, solver);
                    completed = std::move(r.z);
                    converged = r.converged;
                    break;
                }
                case isar::Method::dip: {
                    if (!dip_channels.empty()) {
                        dip.net.channels = dip_channels;
                        dip.net.depth = dip_channels.size();
                    }
                    dip.seed = cmp_seed;
                    auto r = isar::dip_complete_complex(observed, mask, dip);
                    completed = std::move(r.completed);
                    converged = !r.real_part.degenerate && !r.imag_part.degenerate;
                    break;
                }
            }
            isar::save_matrix(completed, cmp_out);
            if (!converged) {
                std::cerr << "warning: solver did not converge\n";
                return kExitSolver;
            }
        } else if (*img) {
            auto image = isar::rd_image(isar::load_matrix(img_in));
            if (img_shift) image = isar::fft_shift(image);
            isar::save_pgm(isar::to_db_image(image, img_top_db), img_top_db, img_out);
        } else if (*met) {
            auto ref = isar::load_matrix(met_ref);
            auto est = isar::load_matrix(met_est);
            if (!met_raw) {
                ref = isar::rd_image(ref);
                est = isar::rd_image(est);
            }
            std::cout << "rmse=" << isar::rmse(ref, est) << '\n'
                      << "correlation=" << isar::correlation(ref, est) << '\n'
                      << "contrast=" << isar::image_contrast(est) << '\n'
                      << "snr_db=" << isar::snr_db(ref, est) << '\n';
        } else if (*exp) {
            auto grid_cfg = isar::load_experiment_config(exp_cfg);
            grid_cfg.deterministic = exp_single;
            auto rows = isar::run_grid(grid_cfg);
            std::cout << isar::summarize_grid(rows);
        } else if (*noi) {
            isar::save_matrix(isar::add_noise(isar::load_matrix(noi_in), noi_snr, noi_seed), noi_out);
        }
    } catch (const isar::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

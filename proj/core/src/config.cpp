#include "t2m/config.hpp"

#include <cstdio>

#include "t2m/errors.hpp"

namespace t2m {

TrainingConfig profile_config(const std::string& name) {
    if (name == "desk") {
        return TrainingConfig{};
    }
    if (name == "paper") {
        TrainingConfig cfg;
        cfg.profile = "paper";
        cfg.n = 256;
        cfg.n_e = 64;
        cfg.n_x = 24;
        cfg.n_z = 16;
        cfg.T_o = 32;
        cfg.fps = 10.0;
        cfg.ae_epochs = 250;
        cfg.ae_lr = 5e-5;
        cfg.a1 = 1.0;
        cfg.a2 = 5.0;
        cfg.gan_epochs = 400;
        cfg.alpha_d = 2e-6;
        cfg.alpha_g = 2e-6;
        cfg.batch_size = 32;
        cfg.embed_window = 5;
        cfg.embed_negatives = 5;
        return cfg;
    }
    throw InputError("unknown profile '" + name + "' (expected 'desk' or 'paper')");
}

std::uint64_t config_hash(const TrainingConfig& cfg) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s|%d|%d|%d|%d|%d|%.17g|%d|%.17g|%.17g|%.17g|%d|%.17g|%.17g|%d|%llu|%.17g|%.17g|"
                  "%s|%d|%d|%d|%d|%.17g|%d|%d",
                  cfg.profile.c_str(), cfg.n, cfg.n_e, cfg.n_x, cfg.n_z, cfg.T_o, cfg.fps,
                  cfg.ae_epochs, cfg.ae_lr, cfg.a1, cfg.a2, cfg.gan_epochs, cfg.alpha_d,
                  cfg.alpha_g, cfg.batch_size, static_cast<unsigned long long>(cfg.seed),
                  cfg.init_scale, cfg.prob_clamp, cfg.cell_state_activation.c_str(),
                  cfg.checkpoint_every, cfg.embed_window, cfg.embed_negatives, cfg.embed_epochs,
                  cfg.embed_lr, cfg.embed_min_count, cfg.eval_generations);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char* p = buf; *p; ++p) {
        hash ^= static_cast<unsigned char>(*p);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace t2m

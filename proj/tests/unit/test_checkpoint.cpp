#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "t2m/checkpoint.hpp"
#include "t2m/errors.hpp"
#include "t2m/params_io.hpp"
#include "t2m/encoder.hpp"
#include "test_util.hpp"

using namespace t2m;
using t2m::testing::random_tensor;

namespace {
std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("tensor store round-trip is exact and order-preserving") {
    Rng rng(19);
    TensorStore store;
    store.put("b/second", random_tensor(rng, {3, 4}));
    store.put("a/first", random_tensor(rng, {7}));
    store.put_scalar("meta/step", 42.0);

    const std::string path = temp_path("t2m_test_ckpt.bin");
    store.save(path);
    const TensorStore loaded = TensorStore::load(path);

    CHECK(loaded.names() == store.names());  // insertion order kept
    for (const auto& name : store.names()) {
        CHECK(loaded.get(name) == store.get(name));
    }
    CHECK(loaded.get_scalar("meta/step") == 42.0);

    SUBCASE("missing tensor raises") { CHECK_THROWS_AS(loaded.get("nope"), InputError); }
    SUBCASE("bad magic rejected") {
        const std::string bad = temp_path("t2m_test_badmagic.bin");
        std::ofstream os(bad, std::ios::binary);
        os << "NOTATENSORFILE....";
        os.close();
        CHECK_THROWS_WITH_AS(TensorStore::load(bad), doctest::Contains("magic"), InputError);
        std::filesystem::remove(bad);
    }
    SUBCASE("truncation detected") {
        std::error_code ec;
        std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2, ec);
        REQUIRE(!ec);
        CHECK_THROWS_AS(TensorStore::load(path), InputError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("typed parameter structs round-trip through a store") {
    Rng rng(23);
    EncoderParams params = EncoderParams::create(5, 3);
    init_uniform(params, rng, 0.7);
    TensorStore store;
    store_params(store, "enc/", params);

    EncoderParams loaded = EncoderParams::create(5, 3);
    load_params(store, "enc/", loaded);
    visit_params(params, [&](const char* name, const Tensor& t) {
        CHECK(store.get(std::string("enc/") + name) == t);
    });
    CHECK(loaded.W_o == params.W_o);
    CHECK(loaded.b_e == params.b_e);

    SUBCASE("dimension drift is a shape error") {
        EncoderParams wrong = EncoderParams::create(6, 3);
        CHECK_THROWS_AS(load_params(store, "enc/", wrong), ShapeError);
    }
}

#include <gtest/gtest.h>
#include <httplib.h>

#include <chrono>
#include <thread>

#include "atelier/error.hpp"
#include "atelier/png_io.hpp"
#include "atelier/segmentation.hpp"
#include "support/errors.hpp"
#include "support/synth.hpp"
#include "support/temp_dir.hpp"

using namespace atelier;
using atelier::testkit::code_of;

namespace {

nlohmann::json fixture() {
  const Bytes raw = read_file(std::filesystem::path(ATELIER_FIXTURE_DIR) / "sidecar_person_laptop.json");
  return nlohmann::json::parse(raw.begin(), raw.end());
}

// In-process stand-in for the model sidecar.
class FakeSidecar {
 public:
  explicit FakeSidecar(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/segment", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Segmentation, PromptIsRequired) {
  BoxFallbackProvider box;
  EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), {}, box); }), ErrorCode::BadRequest);
}

TEST(Segmentation, BoxFallbackMasksAreBoxInteriors) {
  BoxFallbackProvider box;
  SegmentationPrompt prompt;
  prompt.boxes = {{0.0, 0.0, 0.5, 0.5}, {0.25, 0.5, 1.0, 1.0}};
  const auto r = segment(ImageBuffer(16, 8), prompt, box);
  ASSERT_EQ(r.masks.size(), 2u);
  EXPECT_TRUE(r.box_fallback);
  EXPECT_EQ(r.provider, "box");
  EXPECT_EQ(r.masks[0].mask, rasterize_box(prompt.boxes[0], 16, 8));
  EXPECT_EQ(r.masks[1].mask, rasterize_box(prompt.boxes[1], 16, 8));
  EXPECT_EQ(r.masks[0].source, MaskSource::Box);
  EXPECT_EQ(r.masks[1].label, "box 2");
}

TEST(Segmentation, BoxFallbackCannotReadText) {
  BoxFallbackProvider box;
  SegmentationPrompt prompt;
  prompt.text = "person, laptop";
  EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, box); }), ErrorCode::NoDetections);
}

TEST(Segmentation, MergeOrdersTextBeforeUserBoxes) {
  const auto all = merge_box_sources({{0, 0, 1, 1}}, {{0, 0, 0.5, 0.5}, {0, 0, 1, 1}});
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].source, MaskSource::Text);
  EXPECT_EQ(all[1].source, MaskSource::Box);
  EXPECT_EQ(all[2].box, all[0].box);
}

TEST(Segmentation, MaskDirectoryProvider) {
  testkit::TempDir dir;
  write_file(dir.path() / "b_laptop.png", encode_mask_png(testkit::rect_mask(20, 10, 10, 2, 18, 8)));
  write_file(dir.path() / "a_person.png", encode_mask_png(testkit::rect_mask(20, 10, 1, 1, 6, 9)));
  write_file(dir.path() / "notes.txt", std::string("ignored"));
  MaskDirectoryProvider files(dir.path());
  SegmentationPrompt prompt;
  prompt.text = "person, laptop";
  // Request image is twice the mask size: masks are resampled.
  const auto r = segment(ImageBuffer(40, 20), prompt, files);
  ASSERT_EQ(r.masks.size(), 2u);
  EXPECT_EQ(r.masks[0].label, "a_person");
  EXPECT_EQ(r.masks[1].label, "b_laptop");
  EXPECT_EQ(r.masks[0].mask.width(), 40);
  EXPECT_EQ(r.masks[0].mask.count(), 4u * 5u * 8u);
  EXPECT_FALSE(r.box_fallback);

  prompt.boxes = {{0, 0, 1, 1}};
  const auto with_box = segment(ImageBuffer(40, 20), prompt, files);
  ASSERT_EQ(with_box.masks.size(), 3u);
  EXPECT_EQ(with_box.masks[2].source, MaskSource::Box);
}

TEST(Segmentation, MissingMaskDirectory) {
  MaskDirectoryProvider files("/nonexistent/atelier/masks");
  SegmentationPrompt prompt;
  prompt.text = "cat";
  EXPECT_EQ(code_of([&] { segment(ImageBuffer(4, 4), prompt, files); }), ErrorCode::ProviderUnavailable);
}

TEST(Segmentation, SidecarRequestEncoding) {
  SegmentationPrompt prompt;
  prompt.text = "person, laptop";
  prompt.boxes = {{0.1, 0.2, 0.3, 0.4}};
  const ImageBuffer img = testkit::noise_image(6, 5, 1);
  const auto j = encode_sidecar_request(img, prompt);
  EXPECT_EQ(j["text_prompt"], "person, laptop");
  EXPECT_EQ(j["boxes"][0], nlohmann::json({0.1, 0.2, 0.3, 0.4}));
  EXPECT_EQ(decode_png(base64_decode(j["image_png_b64"].get<std::string>())), img);
  EXPECT_FALSE(encode_sidecar_request(img, {}).contains("text_prompt"));
}

TEST(Segmentation, SidecarResponseDecoding) {
  const auto r = decode_sidecar_response(fixture(), 64, 48);
  ASSERT_EQ(r.masks.size(), 2u);
  EXPECT_EQ(r.masks[0].label, "person");
  EXPECT_EQ(r.masks[1].label, "laptop");
  EXPECT_NEAR(r.masks[0].confidence, 0.91, 1e-12);
  EXPECT_TRUE(r.masks[0].mask.any());
  EXPECT_EQ(code_of([] { decode_sidecar_response({{"nope", 1}}, 4, 4); }), ErrorCode::BadRequest);
  auto bad = fixture();
  bad["masks"][0]["source"] = "psychic";
  EXPECT_EQ(code_of([&] { decode_sidecar_response(bad, 64, 48); }), ErrorCode::BadRequest);
}

TEST(Segmentation, SidecarRoundTrip) {
  nlohmann::json seen;
  FakeSidecar sidecar([&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    res.set_content(fixture().dump(), "application/json");
  });
  SidecarProvider provider(sidecar.url(), std::chrono::milliseconds(5000));
  SegmentationPrompt prompt;
  prompt.text = "person, laptop";
  // Larger request image: masks come back resized to it.
  const auto r = segment(ImageBuffer(128, 96), prompt, provider);
  ASSERT_GE(r.masks.size(), 2u);
  EXPECT_EQ(r.provider, "sidecar");
  EXPECT_EQ(r.masks[0].mask.width(), 128);
  EXPECT_EQ(seen["text_prompt"], "person, laptop");
  EXPECT_TRUE(seen.contains("image_png_b64"));
}

TEST(Segmentation, SidecarErrorsMapToCodes) {
  SegmentationPrompt prompt;
  prompt.text = "person";
  {
    FakeSidecar sidecar([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    SidecarProvider p(sidecar.url(), std::chrono::milliseconds(5000));
    EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, p); }), ErrorCode::ProviderUnavailable);
  }
  {
    FakeSidecar sidecar([](const httplib::Request&, httplib::Response& res) {
      res.status = 400;
      res.set_content("bad", "text/plain");
    });
    SidecarProvider p(sidecar.url(), std::chrono::milliseconds(5000));
    EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, p); }), ErrorCode::BadRequest);
  }
  {
    FakeSidecar sidecar([](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"masks": []})", "application/json");
    });
    SidecarProvider p(sidecar.url(), std::chrono::milliseconds(5000));
    EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, p); }), ErrorCode::NoDetections);
  }
  {
    FakeSidecar sidecar([](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      res.set_content(R"({"masks": []})", "application/json");
    });
    SidecarProvider p(sidecar.url(), std::chrono::milliseconds(300));
    EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, p); }), ErrorCode::Timeout);
  }
  {
    // Nothing listens on port 1.
    SidecarProvider p("http://127.0.0.1:1", std::chrono::milliseconds(500));
    EXPECT_EQ(code_of([&] { segment(ImageBuffer(8, 8), prompt, p); }), ErrorCode::ProviderUnavailable);
  }
}

TEST(Segmentation, MakeProvider) {
  EXPECT_EQ(make_provider({})->name(), "box");
  ProviderConfig files;
  files.kind = "files";
  EXPECT_EQ(make_provider(files)->name(), "files");
  ProviderConfig bad;
  bad.kind = "oracle";
  EXPECT_EQ(code_of([&] { make_provider(bad); }), ErrorCode::InvalidConfig);
}

// Copyright 2026 The uavnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "../support/fixtures.hpp"
#include "uavnav/assistant.hpp"
#include "uavnav/collection.hpp"
#include "uavnav/serialization.hpp"

using namespace uavnav;

namespace {

// Compares against tests/golden/<name>; UAVNAV_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(UAVNAV_GOLDEN_DIR) / name;
  const char* update = std::getenv("UAVNAV_UPDATE_GOLDEN");
  if (update && *update && std::string(update) != "0") {
    write_text_file(path, actual);
    MESSAGE("updated " << path.string());
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in, "missing golden file " << path.string() << "; rerun with UAVNAV_UPDATE_GOLDEN=1");
  const std::string expected{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  CHECK(actual == expected);
}

}  // namespace

TEST_CASE("golden: instruction templates") {
  std::ostringstream out;
  for (const GuidanceAction& a :
       {GuidanceAction::cruise(), GuidanceAction::land(), GuidanceAction::turn(ActionKind::TurnLeft, deg2rad(30)),
        GuidanceAction::turn(ActionKind::TurnRight, deg2rad(95)), GuidanceAction::turn(ActionKind::TurnLeft, deg2rad(180)),
        GuidanceAction::climb(ActionKind::Ascend, 5), GuidanceAction::climb(ActionKind::Descend, 12.4),
        GuidanceAction::avoid(ActionKind::AvoidLeft), GuidanceAction::avoid(ActionKind::AvoidRight),
        GuidanceAction::avoid(ActionKind::AvoidUp)}) {
    const std::string text = render_instruction(a);
    out << action_kind_name(a.kind()) << '\t' << text << '\n';
    CHECK(parse_instruction(text).has_value());
  }
  check_golden("instructions.txt", out.str());
}

TEST_CASE("golden: target descriptions") {
  SceneConfig cfg;
  cfg.size_x = cfg.size_y = 300;
  Scene s = generate_scene(12, cfg, "g");
  const std::vector<PlacedObject> objects = {{"car", {150, 150, 2.5}, 2.5, true},
                                             {"human", {40, 250, 1.0}, 1.0, true},
                                             {"tent", {260, 60, 2.0}, 2.0, true},
                                             {"truck", {200, 220, 3.0}, 3.0, true}};
  std::ostringstream out;
  for (const auto& o : objects) {
    const auto d = generate_description(Pose(40, 40, 10), o, s);
    out << o.category << '\n' << d.task_text() << "\n\n";
  }
  check_golden("descriptions.txt", out.str());
}

TEST_CASE("golden: small scene document") {
  SceneConfig cfg;
  cfg.size_x = cfg.size_y = 160;
  cfg.n_regions = 2;
  cfg.min_region_distance = 40;
  cfg.obstacle_density = 0.0008;
  cfg.style = SceneStyle::Forest;
  const Scene s = generate_scene(3, cfg, "golden");
  const std::string doc = dump_canonical(scene_to_json(s)) + "\n";
  check_golden("scene_small.json", doc);
  CHECK(dump_canonical(scene_to_json(scene_from_json(json::parse(doc)))) + "\n" == doc);
}

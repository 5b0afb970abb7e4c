#include "fixture_repo.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "schemev/history_walker.hpp"
#include "schemev/subprocess.hpp"

namespace fs = std::filesystem;

namespace testsupport {

namespace {

std::string commit_date(int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "2020-01-%02dT%02d:00:00+00:00",
                1 + index / 24, index % 24);
  return buf;
}

std::map<std::string, std::string> git_env(int commit_index) {
  std::string date = commit_date(commit_index);
  return {
      {"GIT_CONFIG_GLOBAL", "/dev/null"},
      {"GIT_CONFIG_SYSTEM", "/dev/null"},
      {"GIT_AUTHOR_NAME", "Fixture"},
      {"GIT_AUTHOR_EMAIL", "fixture@example.com"},
      {"GIT_COMMITTER_NAME", "Fixture"},
      {"GIT_COMMITTER_EMAIL", "fixture@example.com"},
      {"GIT_AUTHOR_DATE", date},
      {"GIT_COMMITTER_DATE", date},
  };
}

}  // namespace

void git(const fs::path& repo, const std::vector<std::string>& args,
         int commit_index) {
  std::vector<std::string> argv = {schemev::HistoryWalker::git_executable(),
                                   "-C", repo.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  auto run = schemev::run_process(argv, std::nullopt, git_env(commit_index));
  if (run.exit_code != 0)
    throw std::runtime_error("git " + args.front() + " failed: " + run.err);
}

void init_repo(const fs::path& repo) {
  fs::create_directories(repo);
  git(repo, {"init", "-q"});
}

void write_file(const fs::path& repo, const std::string& rel,
                const std::string& content) {
  fs::path path = repo / rel;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

void remove_file(const fs::path& repo, const std::string& rel) {
  fs::remove(repo / rel);
}

void commit_all(const fs::path& repo, const std::string& message,
                int commit_index) {
  git(repo, {"add", "-A"}, commit_index);
  git(repo, {"commit", "-q", "--allow-empty", "-m", message}, commit_index);
}

namespace {

const char* kPlayer1 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Player {
    @Id Long id;
    String name;
    Integer credits;
}
)";

const char* kMission1 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Mission {
    @Id Long id;
    String title;
}
)";

const char* kPlayer2 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Player {
    @Id Long id;
    String name;
    Integer credits;

    public String displayName() {
        return name;
    }
}
)";

const char* kPlayer3 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;
import java.util.List;

@Entity
public class Player {
    @Id Long id;
    String name;
    Integer credits;
    List<Mission> listOfMissions;

    public String displayName() {
        return name;
    }
}
)";

const char* kMission2 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Mission {
    @Id Long id;
    String title;
    int difficulty;
    boolean completed;
}
)";

const char* kPlayer4 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player {
    @Id Long id;
    String name;

    /* persisted balance */
    Integer credits;
    List<Mission> listOfMissions;

    public String displayName() {
        return name;
    }
}
)";

const char* kPlayer5 = R"(package game;

import com.googlecode.objectify.annotation.AlsoLoad;
import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;
import com.googlecode.objectify.annotation.Ignore;
import java.util.Date;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player {
    @Id Long id;
    String name;

    /* persisted balance, formerly credits */
    @AlsoLoad("credits") Integer coins;
    Date lastLogin;
    @Ignore int hoursSinceLastLogin;
    List<Mission> listOfMissions;

    public String displayName() {
        return name;
    }
}
)";

const char* kStrings1 = R"(package game.util;

public final class Strings {
    private Strings() {
    }

    public static String trimToEmpty(String value) {
        return value == null ? "" : value.trim();
    }
}
)";

const char* kBase1 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;
import java.util.Date;

@Entity
public abstract class BaseEntity {
    @Id Long id;
    Date created;
}
)";

const char* kPlayer6 = R"(package game;

import com.googlecode.objectify.annotation.AlsoLoad;
import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Ignore;
import java.util.Date;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player extends BaseEntity {
    String name;

    /* persisted balance, formerly credits */
    @AlsoLoad("credits") Integer coins;
    Date lastLogin;
    @Ignore int hoursSinceLastLogin;
    List<Mission> listOfMissions;

    public String displayName() {
        return name;
    }
}
)";

const char* kPlayerTest = R"(package game;

public class PlayerTest {
    int runs;

    void checkDisplayName() {
        runs++;
    }
}
)";

const char* kBase2 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;
import java.util.Date;

@Entity
public abstract class BaseEntity {
    @Id Long id;
    Date created;
    String updatedBy;
}
)";

const char* kPlayer7 = R"(package game;

import com.googlecode.objectify.annotation.AlsoLoad;
import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Ignore;
import com.googlecode.objectify.annotation.Index;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player extends BaseEntity {
    @Index String name;

    /* persisted balance, formerly credits */
    @AlsoLoad("credits") Integer coins = 0;
    long lastLogin;
    @Ignore int hoursSinceLastLogin;
    List<Mission> listOfMissions;

    public String displayName() {
        return name;
    }
}
)";

const char* kMission3 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Mission {
    @Id Long id;
    String title;
    int difficulty;
    boolean completed;

    public int estimate() {
        return difficulty * 2;
    }
}
)";

const char* kStrings2 = R"(package game.util;

public final class Strings {
    private Strings() {
    }

    public static String trimToEmpty(String value) {
        return value == null ? "" : value.trim();
    }

    public static boolean isBlank(String value) {
        return trimToEmpty(value).isEmpty();
    }
}
)";

const char* kPlayer8 = R"(package game;

import com.googlecode.objectify.annotation.AlsoLoad;
import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Ignore;
import com.googlecode.objectify.annotation.Index;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player extends BaseEntity {
    @Index String name;

    /* persisted balance, formerly credits */
    @AlsoLoad("credits") Integer coins = 0;
    long lastLogin;
    @Ignore int hoursSinceLastLogin;
    List<Mission> listOfMissions;

    public String displayName() {
        return name.trim();
    }
}
)";

const char* kMission4 = R"(package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Mission {
    @Id Long id;
    String title;
    // difficulty scales 1..10
    int difficulty;
    boolean completed;

    public int estimate() {
        return difficulty * 2;
    }
}
)";

const char* kPlayer9 = R"(package game;

import com.googlecode.objectify.annotation.AlsoLoad;
import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Ignore;
import com.googlecode.objectify.annotation.Index;
import java.util.List;

// Core aggregate of the game domain.
@Entity
public class Player extends BaseEntity {
    @Index String name;

    /* persisted balance, formerly credits */
    @AlsoLoad("credits") Integer coins = 0;

    long lastLogin;
    @Ignore int hoursSinceLastLogin;
    List<Mission> listOfMissions;

    public String displayName() {
        return name.trim();
    }
}
)";

}  // namespace

void build_fixture_history(const fs::path& repo) {
  init_repo(repo);
  int i = 0;

  write_file(repo, "src/game/Player.java", kPlayer1);
  write_file(repo, "src/game/Mission.java", kMission1);
  commit_all(repo, "add player and mission entities", i++);

  write_file(repo, "README.md", "game backend\n");
  commit_all(repo, "add readme", i++);

  write_file(repo, "src/game/Player.java", kPlayer2);
  commit_all(repo, "player display name helper", i++);

  write_file(repo, "src/game/Player.java", kPlayer3);
  commit_all(repo, "track missions per player", i++);

  write_file(repo, "src/game/Mission.java", kMission2);
  commit_all(repo, "mission difficulty and completion", i++);

  write_file(repo, "src/game/Player.java", kPlayer4);
  commit_all(repo, "document player fields", i++);

  write_file(repo, "src/game/Player.java", kPlayer5);
  commit_all(repo, "rename credits to coins, track last login", i++);

  write_file(repo, "src/game/util/Strings.java", kStrings1);
  commit_all(repo, "string helpers", i++);

  write_file(repo, "src/game/BaseEntity.java", kBase1);
  write_file(repo, "src/game/Player.java", kPlayer6);
  commit_all(repo, "extract persistent base class", i++);

  write_file(repo, "README.md", "game backend\n\nbuild: gradle\n");
  commit_all(repo, "document build", i++);

  git(repo, {"mv", "src/game/util/Strings.java", "src/game/common/Strings.java"},
      i);
  commit_all(repo, "move string helpers", i++);

  write_file(repo, "src/game/PlayerTest.java", kPlayerTest);
  commit_all(repo, "player test scaffold", i++);

  write_file(repo, "src/game/BaseEntity.java", kBase2);
  write_file(repo, "src/game/Player.java", kPlayer7);
  commit_all(repo, "audit field, login epoch, indexed names", i++);

  write_file(repo, "src/game/Mission.java", kMission3);
  commit_all(repo, "mission estimate helper", i++);

  write_file(repo, "src/game/common/Strings.java", kStrings2);
  commit_all(repo, "blank check helper", i++);

  write_file(repo, "README.md", "game backend\n\nbuild: gradle\ntest: gradle test\n");
  commit_all(repo, "document tests", i++);

  write_file(repo, "src/game/Player.java", kPlayer8);
  commit_all(repo, "trim display names", i++);

  write_file(repo, "docs/NOTES.md", "schema notes\n");
  commit_all(repo, "add notes", i++);

  write_file(repo, "src/game/Mission.java", kMission4);
  commit_all(repo, "comment difficulty scale", i++);

  remove_file(repo, "src/game/Mission.java");
  commit_all(repo, "drop mission tracking", i++);

  write_file(repo, "README.md", "game backend\n\nbuild: gradle\ntest: gradle test\nci: github\n");
  commit_all(repo, "document ci", i++);

  write_file(repo, "src/game/Player.java", kPlayer9);
  commit_all(repo, "whitespace cleanup", i++);

  write_file(repo, "src/game/common/Strings.java",
             std::string(kStrings2) + "// end\n");
  commit_all(repo, "trailing comment", i++);

  write_file(repo, "README.md", "game backend\n\nbuild: gradle\ntest: gradle test\nci: github actions\n");
  commit_all(repo, "clarify ci", i++);

  write_file(repo, "README.md", "game backend\n\nbuild: gradle\ntest: gradle test\nci: github actions\nlicense: apache\n");
  commit_all(repo, "license note", i++);

  if (i != 25) throw std::runtime_error("fixture history has wrong length");
}

}  // namespace testsupport

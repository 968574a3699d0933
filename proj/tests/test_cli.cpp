#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cvdisc(const std::string& args) {
  const auto capture = std::filesystem::temp_directory_path() / "cvdisc_cli_stdout.txt";
  const std::string cmd = std::string(CVDISC_BINARY) + " " + args + " > " + capture.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  r.out.assign(std::istreambuf_iterator<char>(in), {});
  std::filesystem::remove(capture);
  return r;
}

}  // namespace

TEST(cli, report) {
  const auto r = cvdisc("report --n 3 --alpha2 0.8");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p_s = 0.435042320323"), std::string::npos);
}

TEST(cli, report_vacuum) {
  const auto r = cvdisc("report --n 3 --alpha2 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p_s = 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("p_c_med = 0.333333333333"), std::string::npos);
}

TEST(cli, report_beyond_plotted_alphabets) { EXPECT_EQ(cvdisc("report --n 7 --alpha2 1.0").code, 0); }

TEST(cli, usage_errors) {
  EXPECT_EQ(cvdisc("report --n 1 --alpha2 1").code, 2);
  EXPECT_EQ(cvdisc("report --n 3 --alpha2 -1").code, 2);
  EXPECT_EQ(cvdisc("mc --n 3 --alpha2 1 --shots 0").code, 2);
  EXPECT_EQ(cvdisc("frobnicate").code, 2);
}

TEST(cli, io_error) {
  EXPECT_EQ(cvdisc("sweep --n 3 --alpha2-min 0 --alpha2-max 1 --steps 3 --out /nonexistent/dir/x.csv").code, 3);
}

TEST(cli, sweep_to_file) {
  const auto path = std::filesystem::temp_directory_path() / "cvdisc_cli_sweep.csv";
  EXPECT_EQ(cvdisc("sweep --n 3 --alpha2-min 0 --alpha2-max 6 --steps 601 --out " + path.string()).code, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "alpha_sq,p_s,p_c_med,p_c_med_beta,p_c_ir,fidelity,infidelity,error_bound,i_ud,i_ir,gain,failure_dim");
  std::filesystem::remove(path);
}

TEST(cli, mc_is_deterministic) {
  const auto a = cvdisc("mc --n 3 --alpha2 1 --shots 1000000 --seed 42");
  const auto b = cvdisc("mc --n 3 --alpha2 1 --shots 1000000 --seed 42");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("splitmix64"), std::string::npos);
}

TEST(cli, mc_flags_outliers) {
  // a single shot lands in a cell of probability below 1/37
  EXPECT_EQ(cvdisc("mc --n 8 --alpha2 0.5 --shots 1 --seed 1").code, 4);
}

TEST(cli, n3) {
  const auto vac = cvdisc("n3 --alpha2 0");
  EXPECT_EQ(vac.code, 0);
  EXPECT_NE(vac.out.find("p_s = 0\n"), std::string::npos);
  const auto kink = cvdisc("n3 --alpha2 2.4184");
  EXPECT_EQ(kink.code, 0);
  EXPECT_NE(kink.out.find("kink"), std::string::npos);
}

TEST(cli, verify) {
  const auto r = cvdisc("verify --n 4 --alpha2 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

// tests/cli-test.cc

// Copyright 2026  The wdisc Authors

// See ../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Drives the wdisc binary end to end and checks that its outputs agree
// with the library, plus the exit-code contract.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "wdisc/pipeline.h"
#include "wdisc/synth-corpus.h"
#include "test-util.h"

namespace wdisc {

static int Run(const std::string &args, const std::string &stdout_path = "/dev/null") {
  std::string cmd = std::string(WDISC_BINARY) + " " + args + " > " + stdout_path +
                    " 2>/dev/null";
  int status = std::system(cmd.c_str());
  WDISC_ASSERT(status != -1 && WIFEXITED(status));
  return WEXITSTATUS(status);
}

static void UnitTestEndToEnd(const std::string &dir) {
  WDISC_ASSERT(Run("synth --out " + dir + "/corpus --seed 1 --utterances 30 "
                   "--noise 0 --distractor-rate 0 --no-adjacent-repeats") == 0);
  const std::string manifest = dir + "/corpus/manifest.txt";
  WDISC_ASSERT(Run("promseg --manifest " + manifest +
                   " --window 1 --prominence 0.3 --pca-dim 16 --clusters 20"
                   " --restarts 10 --out " + dir + "/b.txt --classes " + dir +
                   "/c.txt") == 0);
  WDISC_ASSERT(Run("eval --manifest " + manifest + " --boundaries " + dir +
                       "/b.txt --classes " + dir + "/c.txt",
                   dir + "/eval.txt") == 0);
  WDISC_ASSERT(Run("eval --json --manifest " + manifest + " --boundaries " + dir +
                       "/b.txt --classes " + dir + "/c.txt",
                   dir + "/eval.json") == 0);

  // The same report computed through the library.
  CorpusManifest m = ReadManifest(manifest);
  std::vector<Segmentation> hyp = OrderByManifest(ReadBoundaryFile(dir + "/b.txt"), m);
  ClassFile cls = ReadClassFile(dir + "/c.txt", &m);
  AlignmentMap words = ReadAlignmentMap(m.alignment_paths.at(Tier::kWord), Tier::kWord);
  AlignmentMap phones = ReadAlignmentMap(m.alignment_paths.at(Tier::kPhone), Tier::kPhone);
  EvalReport r = RunEval(&hyp, &cls, &words, &phones, m.TotalDuration(), EvalOptions());
  WDISC_ASSERT(test::ReadBytes(dir + "/eval.txt") == FormatEvalReport(r, false));
  WDISC_ASSERT(test::ReadBytes(dir + "/eval.json") == FormatEvalReport(r, true));
  WDISC_ASSERT(r.boundary->f1 == 100.0 && r.lexicon->ned == 0.0);

  // Library run with the same settings writes identical files.
  PipelineConfig cfg;
  cfg.manifest = manifest;
  cfg.promseg = {1, 0.3};
  cfg.pca_dim = 16;
  cfg.num_clusters = 20;
  cfg.cluster_restarts = 10;
  BottomUpResult bu = RunPromSegClus(LoadCorpus(cfg), cfg);
  WriteBoundaryFile(bu.segmentations, dir + "/lib-b.txt");
  WriteClassFile(bu.lexicon.classes, dir + "/lib-c.txt");
  WDISC_ASSERT(test::ReadBytes(dir + "/lib-b.txt") == test::ReadBytes(dir + "/b.txt"));
  WDISC_ASSERT(test::ReadBytes(dir + "/lib-c.txt") == test::ReadBytes(dir + "/c.txt"));

  // Top-down system on the synthetic candidates, with an iteration log.
  WDISC_ASSERT(Run("eskmeans --manifest " + manifest + " --clusters 20 --candidates " +
                   dir + "/corpus/candidates.txt --pca-dim 16 --iterations 3 --out " +
                   dir + "/e.txt --classes " + dir + "/e.cls --log " + dir +
                   "/e.log") == 0);
  std::string log = test::ReadBytes(dir + "/e.log");
  WDISC_ASSERT(log.rfind("iter=0 phase=cluster cost=", 0) == 0);
  WDISC_ASSERT(log.find("iter=3 phase=cluster") != std::string::npos);
  std::vector<Segmentation> es = ReadBoundaryFile(dir + "/e.txt");
  std::vector<CandidateSet> cands = ReadCandidateFile(dir + "/corpus/candidates.txt");
  WDISC_ASSERT(es.size() == cands.size());
  for (std::size_t u = 0; u < es.size(); u++) WDISC_ASSERT(IsSubsetOf(es[u], cands[u]));

  WDISC_ASSERT(Run("report --classes " + dir + "/c.txt --manifest " + manifest,
                   dir + "/report.txt") == 0);
  WDISC_ASSERT(!test::ReadBytes(dir + "/report.txt").empty());
}

static void UnitTestExitCodes(const std::string &dir) {
  const std::string manifest = dir + "/corpus/manifest.txt";
  WDISC_ASSERT(Run("") == 2);                          // no subcommand
  WDISC_ASSERT(Run("promseg --bogus-flag") == 2);      // usage error
  WDISC_ASSERT(Run("eval --manifest " + manifest) == 2);  // nothing to score
  WDISC_ASSERT(Run("eskmeans --manifest " + manifest + " --clusters 0 --classes " +
                   dir + "/x.cls") == 2);              // bad parameter
  WDISC_ASSERT(Run("promseg --manifest " + manifest + " --window 0 --out " + dir +
                   "/x.txt") == 2);
  WDISC_ASSERT(Run("promseg --manifest " + dir + "/missing.txt --out " + dir +
                   "/x.txt") == 3);                    // unreadable input
  test::WriteText(dir + "/bad.bnd", "synth_0000 5 3\n");
  WDISC_ASSERT(Run("eval --manifest " + manifest + " --boundaries " + dir +
                   "/bad.bnd") == 2);                  // malformed boundaries
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  std::string dir = test::TempDir("cli");
  UnitTestEndToEnd(dir);
  UnitTestExitCodes(dir);
  std::filesystem::remove_all(dir);
  std::cout << "Test OK.\n";
  return 0;
}

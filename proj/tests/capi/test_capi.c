#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>
#include <unistd.h>

#include "simclone/simclone.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void write_file(const char* path, const char* text) {
  FILE* f = fopen(path, "w");
  if (!f) {
    perror(path);
    exit(1);
  }
  fputs(text, f);
  fclose(f);
}

static void basics(void) {
  CHECK(strlen(simclone_version()) > 0);
  CHECK(strcmp(simclone_status_name(SIMCLONE_E_CHECKSUM), "checksum") == 0);
  CHECK(simclone_config_new(NULL) == SIMCLONE_E_INVALID_ARGUMENT);

  simclone_config* cfg = NULL;
  CHECK(simclone_config_new(&cfg) == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "no_such_key", "1") == SIMCLONE_E_CONFIG);
  CHECK(simclone_config_set(cfg, "lang", "cobol") == SIMCLONE_E_CONFIG);
  CHECK(strstr(simclone_last_error(), "cobol") != NULL);
  CHECK(simclone_config_set(cfg, "inputs", "many") == SIMCLONE_E_CONFIG);
  CHECK(simclone_config_set(cfg, "inputs", "64") == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "lang", "python,java") == SIMCLONE_OK);

  char* json = NULL;
  CHECK(simclone_config_to_json(cfg, &json) == SIMCLONE_OK);
  CHECK(json && strstr(json, "\"inputs\": 64") != NULL);
  simclone_string_free(json);

  simclone_report* rep = NULL;
  CHECK(simclone_detect(cfg, NULL) == SIMCLONE_E_INVALID_ARGUMENT);
  CHECK(simclone_validate("/nonexistent/simclone-run", NULL, &rep) == SIMCLONE_E_MISSING_ARTIFACTS);
  CHECK(rep == NULL);
  simclone_config_free(cfg);
}

static void end_to_end(const char* dir, const char* shim) {
  char corpus[512], out[512], pairs[512], imported[512];
  snprintf(corpus, sizeof corpus, "%s/corpus", dir);
  snprintf(out, sizeof out, "%s/run", dir);
  snprintf(pairs, sizeof pairs, "%s/pairs.txt", dir);
  snprintf(imported, sizeof imported, "%s/imported", dir);
  mkdir(dir, 0755);
  mkdir(corpus, 0755);
  char file[600];
  snprintf(file, sizeof file, "%s/sums.py", corpus);
  write_file(file,
             "def total(xs):\n"
             "    s = 0\n"
             "    for x in xs:\n"
             "        s = s + x\n"
             "    return s\n"
             "\n"
             "def total2(values):\n"
             "    acc = 0\n"
             "    i = 0\n"
             "    while i < len(values):\n"
             "        acc += values[i]\n"
             "        i += 1\n"
             "    return acc\n");

  simclone_config* cfg = NULL;
  CHECK(simclone_config_new(&cfg) == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "lang", "python") == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "corpus", corpus) == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "inputs", "32") == SIMCLONE_OK);
  /* mixed-type arrays make both loops raise on the same records, which never count as matches */
  CHECK(simclone_config_set(cfg, "sim_t", "0.5") == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "workers", "1") == SIMCLONE_OK);
  CHECK(simclone_config_set(cfg, "out", out) == SIMCLONE_OK);
  CHECK(simclone_config_set_shim(cfg, "python", shim) == SIMCLONE_OK);

  simclone_report* rep = NULL;
  simclone_status s = simclone_detect(cfg, &rep);
  if (s != SIMCLONE_OK) fprintf(stderr, "detect: %s\n", simclone_last_error());
  CHECK(s == SIMCLONE_OK);
  if (rep) {
    CHECK(simclone_report_cluster_count(rep) >= 1);
    CHECK(simclone_report_clone_count(rep) >= 2);
    CHECK(strstr(simclone_report_json(rep), "\"clusters\"") != NULL);
    CHECK(strstr(simclone_report_digest(rep), "sums.py") != NULL);
    double p = -1;
    CHECK(simclone_report_precision(rep, &p) == SIMCLONE_E_INVALID_ARGUMENT);
    simclone_report_free(rep);
  }

  simclone_config* over = NULL;
  CHECK(simclone_config_new(&over) == SIMCLONE_OK);
  CHECK(simclone_config_set_shim(over, "python", shim) == SIMCLONE_OK);
  rep = NULL;
  s = simclone_validate(out, over, &rep);
  if (s != SIMCLONE_OK) fprintf(stderr, "validate: %s\n", simclone_last_error());
  CHECK(s == SIMCLONE_OK);
  if (rep) {
    double p = -1;
    CHECK(simclone_report_precision(rep, &p) == SIMCLONE_OK);
    CHECK(p >= 0.0 && p <= 1.0);
    CHECK(strstr(simclone_report_json(rep), "\"validation\"") != NULL);
    simclone_report_free(rep);
  }
  simclone_config_free(over);
  simclone_config_free(cfg);

  write_file(pairs, "# external pairs\nx1,x2\nx2 x3\n[\"y1\",\"y2\"]\n");
  rep = NULL;
  CHECK(simclone_import_pairs(pairs, imported, NULL, &rep) == SIMCLONE_OK);
  if (rep) {
    CHECK(simclone_report_cluster_count(rep) == 2);
    CHECK(simclone_report_clone_count(rep) == 5);
    simclone_report_free(rep);
  }
}

int main(int argc, char** argv) {
  if (argc < 3) {
    fprintf(stderr, "usage: %s SCRATCH_DIR PYTHON_SHIM\n", argv[0]);
    return 2;
  }
  basics();
  end_to_end(argv[1], argv[2]);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}

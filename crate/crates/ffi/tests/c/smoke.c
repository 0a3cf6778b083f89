#include <stdio.h>
#include "ogc.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      const char *e = ogc_last_error();                          \
      fprintf(stderr, "failed: %s (%s)\n", #cond, e ? e : "");   \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  OgcCode *code = NULL;
  CHECK(ogc_code_new(2, 2, 3, &code) == OGC_STATUS_OK);
  CHECK(ogc_code_length(code) == 40);
  CHECK(ogc_code_dimension(code) == 10);
  uint64_t d = 0;
  CHECK(ogc_code_min_distance(code, 1u << 20, &d) == OGC_STATUS_OK);
  CHECK(d == 18);
  CHECK(ogc_code_min_distance(code, 10, &d) == OGC_STATUS_BUDGET_EXCEEDED);
  CHECK(ogc_last_error() != NULL);
  ogc_code_free(code);

  const uint32_t j[] = {1, 2, 5, 6};
  OgcSignMatrix *a = NULL, *b = NULL;
  CHECK(ogc_sign_matrix_from_cap(4, 3, j, 4, &a) == OGC_STATUS_OK);
  CHECK(ogc_sign_matrix_formula(2, &b) == OGC_STATUS_OK);
  CHECK(ogc_sign_matrix_order(a) == 4);
  CHECK(ogc_sign_matrix_equal(a, b));
  CHECK(ogc_sign_matrix_is_hadamard(a));
  CHECK(ogc_sign_matrix_get(a, 3, 3) == 1);
  ogc_sign_matrix_free(a);
  ogc_sign_matrix_free(b);

  uint64_t bound = 0;
  CHECK(ogc_mr1_lower_bound(3, 2, 2, 3, &bound) == OGC_STATUS_OK && bound == 10);
  printf("ok\n");
  return 0;
}

#include <stdio.h>
#include "conway_ramond.h"

int main(void) {
    CrFrameShape *f = NULL;
    if (cr_frame_parse("1^-3 3^9", &f) != CR_STATUS_OK) {
        char msg[256];
        cr_last_error_message(msg, sizeof msg, NULL);
        fprintf(stderr, "parse failed: %s\n", msg);
        return 1;
    }
    CrClassResult *r = NULL;
    if (cr_classify(f, 5, 1, &r) != CR_STATUS_OK) {
        return 1;
    }
    uint64_t b = 0, fe = 0;
    enum CrClassification c;
    cr_result_counts(r, &b, &fe);
    cr_result_classification(r, &c);
    printf("%llu %llu %d\n", (unsigned long long)b, (unsigned long long)fe, (int)c);
    cr_result_free(r);
    cr_frame_free(f);
    return 0;
}

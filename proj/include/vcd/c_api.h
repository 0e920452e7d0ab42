#ifndef VCD_C_API_H
#define VCD_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Scores a flat float32 video buffer laid out N x H x W x C (samples in
 * [0,1], conditioning frame at index 0) with a key=value MetricConfig text.
 * Returns a newly allocated NUL-terminated JSON report, or a JSON object
 * {"error": ..., "kind": ...} on failure. Never returns NULL except on
 * allocation failure. Release with vcd_free_string. */
char* vcd_score_buffer(const float* data, size_t length, uint32_t n, uint32_t h, uint32_t w,
                       uint32_t c, const char* config_text);

void vcd_free_string(char* text);

#ifdef __cplusplus
}
#endif

#endif

/* Links against the static library through the generated header. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "lognull.h"

int main(void) {
    LognullGraph *graph = NULL;
    LognullPartition *truth = NULL;
    if (lognull_graph_from_dataset("karate", &graph, &truth) != LOGNULL_STATUS_OK) {
        return 1;
    }
    double value = 0.0;
    LognullParams params;
    if (lognull_loglik(graph, truth, LOGNULL_MODEL_ILFR, &value, &params) != LOGNULL_STATUS_OK) {
        return 2;
    }
    LognullPartition *found = NULL;
    LognullDetectSummary summary;
    if (lognull_detect(graph, LOGNULL_MODEL_DCPPM, LOGNULL_STRATEGY_MAX, NAN, 0, &found, &summary)
        != LOGNULL_STATUS_OK) {
        return 3;
    }
    LognullSimilarity sim;
    if (lognull_similarity(found, truth, &sim) != LOGNULL_STATUS_OK) {
        return 4;
    }
    if (lognull_graph_from_edge_list("x y z\n", &graph) != LOGNULL_STATUS_PARSE
        || strstr(lognull_last_error(), "line 1") == NULL) {
        return 5;
    }
    printf("%.2f %.4f %zu %.3f\n", value, params.mu, summary.communities, sim.nmi);
    lognull_partition_free(found);
    lognull_partition_free(truth);
    lognull_graph_free(graph);
    return 0;
}

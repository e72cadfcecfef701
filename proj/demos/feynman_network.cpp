// Builds the word network of a short quote and prints its structure.

#include <cstdio>
#include <iostream>

#include <storynet/storynet.hpp>

int main() {
    using namespace storynet;
    const char* quote = "To those who do not know mathematics it is difficult to get across a real feeling "
                        "as to the beauty, the deepest beauty, of nature...";

    const auto stream = make_stream(quote, "feynman", lemmatizer(lemmatizer_kind::identity));
    const auto net = build_network(stream, 2);
    std::printf("%zu words, %zu vertices, %zu edges\n", net.n_words(), net.n_vertices(), net.edge_count());

    const auto beauty = *net.find("beauty");
    std::printf("neighbors of \"beauty\":");
    for (auto v : net.neighbors(beauty))
        std::printf(" %s", net.label(v).c_str());
    std::printf("\n\n");

    const auto cc = clustering_coefficients(net);
    std::printf("%-12s %6s %6s\n", "vertex", "degree", "C");
    for (vertex_id v = 0; v < net.vertex_count(); ++v)
        std::printf("%-12s %6zu %6.3f\n", net.label(v).c_str(), net.degree(v), cc[v]);

    const auto geo = mean_geodesic(net);
    const auto sw = small_world_check(geo);
    std::printf("\nmean geodesic %.3f, log10 N %.3f, small world: %s\n", sw.mean_geodesic, sw.log10_n,
                sw.small_world ? "yes" : "no");

    std::cout << "\nedge list:\n";
    write_edge_list(std::cout, net);
}

"""
Graphs, d-separation and the ground-truth PAG
=============================================

A hidden common cause leaves a footprint that only a PAG can express. We
build a small DAG with one latent node, query the d-separation oracle, and
look at the PAG that the oracle implies over the observed variables.
"""

from icdlib import CausalDag, DSepOracle, d_separated, true_pag

###############################################################################
# Node 0 is latent and drives both 1 and 2; 2 and 3 both cause 4.

dag = CausalDag.from_edges(5, [(0, 1), (0, 2), (2, 4), (3, 4)], latent=[0])
print(dag.to_text())

###############################################################################
# d-separation works on DAG ids. Conditioning on the collider 4 opens 2 - 3.

print("2 _|_ 3        :", d_separated(dag, 2, 3, set()))
print("2 _|_ 3 | {4}  :", d_separated(dag, 2, 3, {4}))
print("1 _|_ 2 | {}   :", d_separated(dag, 1, 2, set()))

###############################################################################
# The oracle speaks in observed positions: position i is the i-th observed
# DAG node. The latent confounder keeps 1 and 2 dependent given anything.

o = DSepOracle(dag)
print("observed DAG ids:", o.observed)
print("pos 0 _|_ pos 1 given {pos 3}:", o(0, 1, [3]))

###############################################################################
# In the PAG the confounded pair (positions 0 and 1) is joined by o-o: from
# independence facts alone a hidden common cause looks like a direct link.
# The collider at DAG node 4 survives as two arrowheads.

print(true_pag(dag).to_text())

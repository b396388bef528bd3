"""Exact decomposition of efficient and weakly efficient solution sets of piecewise linear vector optimization problems."""

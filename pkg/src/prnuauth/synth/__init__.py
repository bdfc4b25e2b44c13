"""
Package implementing a deterministic synthetic camera: a known PRNU pattern is planted into
rendered scenes so extraction and matching can be checked against ground truth.

"""

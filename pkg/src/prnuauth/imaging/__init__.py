"""
Package implementing geometric normalization of images so that every downstream stage
operates on same-shape luminance matrices.

"""

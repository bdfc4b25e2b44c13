"""
Package implementing all I/O methods for reading and writing images and fingerprints.

Currently supports binary 8-bit Netpbm images (PGM/PPM) and an in-house fingerprint format.

"""

"""
Package implementing PRNU fingerprint extraction and matching: wavelet transform,
denoising, maximum-likelihood aggregation, PCE scoring, calibration and plotting.

"""

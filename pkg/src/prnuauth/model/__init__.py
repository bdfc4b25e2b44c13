"""
Package defining the data types handled by the toolkit: luminance images, noise
residuals and camera fingerprints.

"""

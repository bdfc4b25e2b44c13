"""
Package implementing the two-stage camera authentication protocol: registration stores a
customer's camera fingerprint, verification matches fresh probe frames against it and combines
the result with an external face-recognition verdict.

"""

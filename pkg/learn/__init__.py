"""Classical post-processing: standardization, kernel PCA, k-means, one-class SVM, and sweeps."""

// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

int main() { return 0; }

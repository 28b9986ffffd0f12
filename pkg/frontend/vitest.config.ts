import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // e2e tests boot the real service, so hooks need room to breathe
    testTimeout: 60_000,
    hookTimeout: 120_000,
  },
});

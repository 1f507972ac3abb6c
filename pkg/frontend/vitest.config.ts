import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    environment: 'node', // DOM suites opt in per file
    testTimeout: 20000,
    hookTimeout: 30000,
  },
});

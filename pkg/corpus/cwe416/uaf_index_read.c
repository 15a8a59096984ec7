int uaf_index_read() {
    int *p = malloc(16);
    free(p);
    int x = p[2];
    return x;
}

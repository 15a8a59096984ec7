int uaf_read() {
    int *p = malloc(4);
    free(p);
    int x = *p;
    return x;
}

int main()
{
    int x;
    int y;
    int p = x * y;
    int q = -x * 3;
    p = p - q;
    return 0;
}
